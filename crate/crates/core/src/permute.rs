//! Choosing the order of the left class.
//!
//! For plain distance matchings (`b(s) = 1`) an optimal order is found
//! exactly: a degree-constrained edge set that upper-bounds every order is
//! laid out through a truncated table so that it becomes feasible. For
//! general `b`, the randomized algorithms relax the distance rule to degree
//! caps, draw a uniform (cyclic) order and keep the relaxation edges whose
//! right endpoint has no other relaxation edge among the `d − 1` preceding
//! positions. They are derandomized by conditional expectations.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::exact::{solve_bruteforce, ExactError};
use crate::instance::{check_feasible, positions_of, Bound, Instance, Matching};
use crate::netflow::{max_weight_b_matching, max_weight_capped_excess, FlowError};
use crate::rational::{int, pow, ratio, Rational};

/// Largest left class accepted by the enumeration oracles.
pub const ENUMERATION_LIMIT: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum PermuteError {
    #[error("precondition violated: {0}")]
    PreconditionViolated(&'static str),
    #[error("table parameters do not satisfy n = k*d + r with 0 <= r < d")]
    ParameterMismatch,
    #[error("parameters outside the range of the formula")]
    ParameterOutOfRange,
    #[error("left class has {n} nodes, more than the enumeration limit {limit}")]
    InstanceTooLarge { n: usize, limit: usize },
    #[error(transparent)]
    Flow(#[from] FlowError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    Optimal,
    Randomized,
    Derandomized,
    TGreedy,
    BruteForce,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Optimal => "optimal",
            Method::Randomized => "rand",
            Method::Derandomized => "derand",
            Method::TGreedy => "tgreedy",
            Method::BruteForce => "brute",
        }
    }
}

/// What is known about the quality of a result.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoundCertificate {
    /// Optimal over all orders.
    Optimal,
    /// The (expected, for randomized methods) weight is at least this factor
    /// times the optimum over all orders.
    Factor(Rational),
}

impl BoundCertificate {
    pub fn factor(&self) -> Rational {
        match self {
            BoundCertificate::Optimal => Rational::one(),
            BoundCertificate::Factor(f) => f.clone(),
        }
    }
}

/// An order of the left class together with a matching feasible under it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermutationResult {
    /// `order[p]` is the left node placed at position `p`. Cyclic orders are
    /// rotated so that node 0 sits at position 0.
    pub order: Vec<usize>,
    pub cyclic: bool,
    /// Edge ids of the original instance.
    pub matching: Matching,
    pub value: Rational,
    pub method: Method,
    pub seed: Option<u64>,
    pub bound: Option<BoundCertificate>,
    /// Weight of the degree-constrained relaxation the method started from.
    pub relaxation_weight: Option<Rational>,
}

impl PermutationResult {
    /// The instance with its left class reordered by `order`.
    pub fn permuted_instance(&self, inst: &Instance) -> Instance {
        inst.permuted(&self.order).expect("order is a permutation")
    }

    pub fn is_feasible(&self, inst: &Instance) -> bool {
        check_feasible(&self.permuted_instance(inst), &self.matching).is_feasible()
    }
}

/// Rotates a cyclic order so that node 0 comes first.
pub fn canonical_cyclic(order: &[usize]) -> Vec<usize> {
    match order.iter().position(|&s| s == 0) {
        Some(p) => order[p..].iter().chain(&order[..p]).copied().collect(),
        None => order.to_vec(),
    }
}

/// Truncated table used to turn a degree-constrained edge set into an order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableLayout {
    pub rows: usize,
    pub cols: usize,
    pub k: usize,
    pub r: usize,
    pub kept: Vec<Vec<bool>>,
    /// Index in the fill sequence of each kept cell, filled row-major.
    pub fill: Vec<Vec<Option<usize>>>,
    /// Fill indices in column-major reading order.
    pub read_order: Vec<usize>,
}

/// Non-cyclic: `d × (k+1)` with the last column cut to its first `r` cells.
/// Cyclic: `(d+1) × k` with the last row cut to its first `r` cells when
/// `r < k`, and in general `(⌊n/k⌋+1) × k` with `n mod k` cells in the last row.
pub fn table_layout(
    n: usize,
    d: usize,
    k: usize,
    r: usize,
    cyclic: bool,
) -> Result<TableLayout, PermuteError> {
    if d == 0 || r >= d || k * d + r != n || (cyclic && k == 0 && n > 0) {
        return Err(PermuteError::ParameterMismatch);
    }
    // Cyclic: `q + 1` rows with `q = ⌊n/k⌋` and `n mod k` cells in the last
    // row. For `r < k` that is the `(d+1) × k` table; for `r ≥ k` every column
    // still has at least `d + 1` cells, which keeps the rows feasible.
    let (rows, cols, last) = if cyclic { (n / k.max(1) + 1, k, n % k.max(1)) } else { (d, k + 1, r) };
    let kept: Vec<Vec<bool>> = (0..rows)
        .map(|row| {
            (0..cols)
                .map(|col| if cyclic { row + 1 < rows || col < last } else { col < k || row < last })
                .collect()
        })
        .collect();
    let mut fill = vec![vec![None; cols]; rows];
    let mut next = 0;
    for row in 0..rows {
        for col in 0..cols {
            if kept[row][col] {
                fill[row][col] = Some(next);
                next += 1;
            }
        }
    }
    let read_order: Vec<usize> =
        (0..cols).flat_map(|col| (0..rows).map(move |row| (row, col))).filter_map(|(row, col)| fill[row][col]).collect();
    debug_assert_eq!(read_order.len(), n);
    Ok(TableLayout { rows, cols, k, r, kept, fill, read_order })
}

fn neighbours_by_t(inst: &Instance, ids: &[usize]) -> Vec<Vec<usize>> {
    let mut by_t = vec![Vec::new(); inst.t_count()];
    for &id in ids {
        let e = inst.edge(id);
        by_t[e.t].push(e.s);
    }
    for list in &mut by_t {
        list.sort_unstable();
    }
    by_t
}

/// An order under which the heaviest distance matching is as heavy as
/// under any order, with that matching. Requires `b(s) = 1`; right bounds
/// must be unbounded unless `respect_bt` is set.
pub fn optimal_permutation_distance_matching(
    inst: &Instance,
    respect_bt: bool,
) -> Result<PermutationResult, PermuteError> {
    if inst.b_s().iter().any(|&b| b != 1) {
        return Err(PermuteError::PreconditionViolated("every left bound must be 1"));
    }
    if !respect_bt && inst.b_t().iter().any(|b| !b.is_unbounded()) {
        return Err(PermuteError::PreconditionViolated(
            "right bounds are finite; enable respect_bt to honour them",
        ));
    }
    let (n, d) = (inst.n(), inst.d());
    let cap_t = respect_bt.then(|| inst.b_t());
    let (k, r) = (n / d, n % d);

    let (ids, order): (Vec<usize>, Vec<usize>) = if inst.is_cyclic() && k == 0 {
        // Any two positions conflict, so right degrees are at most 1.
        let caps: Vec<Bound> = (0..inst.t_count()).map(|_| Bound::Finite(1)).collect();
        let res = max_weight_b_matching(inst, &vec![Bound::Finite(1); n], &caps)?;
        (res.edge_ids, (0..n).collect())
    } else if inst.is_cyclic() {
        let caps: Vec<Bound> = (0..inst.t_count())
            .map(|t| Bound::Finite(cap_t.map_or(Bound::Unbounded, |c| c[t]).min_with(k as u32)))
            .collect();
        let res = max_weight_b_matching(inst, &vec![Bound::Finite(1); n], &caps)?;
        let by_t = neighbours_by_t(inst, &res.edge_ids);
        let mut ts: Vec<usize> = (0..inst.t_count()).filter(|&t| by_t[t].len() == k).collect();
        ts.extend((0..inst.t_count()).filter(|&t| by_t[t].len() != k));
        let seq = sequence(n, &by_t, &ts, ts.len());
        let layout = table_layout(n, d, k, r, true)?;
        (res.edge_ids, layout.read_order.iter().map(|&i| seq[i]).collect())
    } else {
        let res = max_weight_capped_excess(inst, k as u32, r as u32, cap_t)?;
        let by_t = neighbours_by_t(inst, &res.edge_ids);
        let deg = |t: usize| by_t[t].len();
        let mut ts: Vec<usize> = (0..inst.t_count()).filter(|&t| deg(t) == k + 1).collect();
        ts.extend((0..inst.t_count()).filter(|&t| deg(t) < k));
        let middle_end = ts.len();
        ts.extend((0..inst.t_count()).filter(|&t| deg(t) == k));
        let seq = sequence(n, &by_t, &ts, middle_end);
        let layout = table_layout(n, d, k, r, false)?;
        (res.edge_ids, layout.read_order.iter().map(|&i| seq[i]).collect())
    };
    let order = if inst.is_cyclic() { canonical_cyclic(&order) } else { order };
    let matching = Matching::from_edges(inst, ids).expect("valid edge ids");
    let value = matching.weight(inst);
    let result = PermutationResult {
        order,
        cyclic: inst.is_cyclic(),
        matching,
        value: value.clone(),
        method: Method::Optimal,
        seed: None,
        bound: Some(BoundCertificate::Optimal),
        relaxation_weight: Some(value),
    };
    debug_assert!(result.is_feasible(inst));
    Ok(result)
}

/// Fill sequence: neighbour intervals of the right nodes in `ts`, with the
/// unmatched left nodes inserted before `ts[insert_at..]`.
fn sequence(n: usize, by_t: &[Vec<usize>], ts: &[usize], insert_at: usize) -> Vec<usize> {
    let mut matched = vec![false; n];
    for list in by_t {
        for &s in list {
            matched[s] = true;
        }
    }
    let mut seq = Vec::with_capacity(n);
    for &t in &ts[..insert_at] {
        seq.extend_from_slice(&by_t[t]);
    }
    seq.extend((0..n).filter(|&s| !matched[s]));
    for &t in &ts[insert_at..] {
        seq.extend_from_slice(&by_t[t]);
    }
    seq
}

/// Right-side caps of the randomized algorithms: `⌊n/d⌋` (cyclic) or
/// `⌈n/d⌉` (non-cyclic), further limited by `b(t)`.
pub fn relaxed_caps(inst: &Instance) -> Vec<Bound> {
    let (n, d) = (inst.n(), inst.d());
    let cap = if inst.is_cyclic() { n / d } else { n.div_ceil(d) } as u32;
    inst.b_t().iter().map(|b| Bound::Finite(b.min_with(cap))).collect()
}

/// Heaviest edge set respecting `b(s)` and the relaxed right caps, with
/// the largest cap `k` (at least 1).
pub fn relaxation(inst: &Instance) -> Result<(Vec<usize>, Rational, u32), PermuteError> {
    let caps_t = relaxed_caps(inst);
    let caps_s: Vec<Bound> = inst.b_s().iter().map(|&b| Bound::Finite(b)).collect();
    let res = max_weight_b_matching(inst, &caps_s, &caps_t)?;
    let k = caps_t.iter().filter_map(|b| b.finite()).max().unwrap_or(1).max(1);
    Ok((res.edge_ids, res.total_weight, k))
}

/// Preceding positions of `p` within distance `d − 1`.
fn preceding(n: usize, d: usize, cyclic: bool, p: usize) -> impl Iterator<Item = usize> {
    let reach = if cyclic { (d - 1).min(n.saturating_sub(1)) } else { (d - 1).min(p) };
    (1..=reach).map(move |j| (p + n - j) % n)
}

/// Keeps the relaxation edges whose right endpoint has no other relaxation
/// edge among the `d − 1` positions before them.
pub fn window_filter(inst: &Instance, relaxed: &[usize], order: &[usize]) -> Matching {
    let n = inst.n();
    let pos = positions_of(order, n).expect("order is a permutation");
    let mut marked = vec![vec![false; n]; inst.t_count()];
    for &id in relaxed {
        let e = inst.edge(id);
        marked[e.t][pos[e.s]] = true;
    }
    let kept = relaxed.iter().copied().filter(|&id| {
        let e = inst.edge(id);
        preceding(n, inst.d(), inst.is_cyclic(), pos[e.s]).all(|q| !marked[e.t][q])
    });
    Matching::from_edges(inst, kept).expect("valid edge ids")
}

/// `α(d, k)` for cyclic and `β(d, k)` for non-cyclic orders; 1 when `k ≤ 1`.
pub fn analytic_bound(d: usize, k: usize, cyclic: bool) -> Rational {
    if k <= 1 || d <= 1 {
        return Rational::one();
    }
    let by_d = pow(&(Rational::one() - ratio(1, d as i64)), (d - 1) as u32);
    let by_k = if cyclic {
        pow(&(Rational::one() - ratio(1, k as i64)), (k - 1) as u32)
    } else {
        let inner = pow(&(Rational::one() - ratio(1, k as i64 - 1)), k as u32);
        (Rational::one() + int(k as i64 - 1) * inner) / int(k as i64)
    };
    by_d.max(by_k)
}

/// Whether `x > 1/e`, decided with a rational lower bound on `e`.
pub fn exceeds_inverse_e(x: &Rational) -> bool {
    let mut e_low = Rational::zero();
    let mut term = Rational::one();
    for i in 1..=20 {
        e_low += &term;
        term /= int(i);
    }
    x * e_low > Rational::one()
}

/// `(d² + d + 2) / (2(d² + d))`.
pub fn conjecture_factor(d: usize) -> Rational {
    let d = d as i64;
    ratio(d * d + d + 2, 2 * (d * d + d))
}

/// Probability that a relaxation edge at a right node of relaxed degree `k`
/// survives the window filter. Cyclic orders: the same at every position.
/// Non-cyclic orders: at 0-based position `position`, or averaged over all
/// positions when `None`.
pub fn survival_probability(
    n: usize,
    d: usize,
    k: usize,
    cyclic: bool,
    position: Option<usize>,
) -> Result<Rational, PermuteError> {
    if k == 0 || d == 0 {
        return Err(PermuteError::ParameterOutOfRange);
    }
    let factor = |j: usize| ratio((n - k - (j - 1)) as i64, (n - j) as i64);
    if cyclic {
        if n < d * k {
            return Err(PermuteError::ParameterOutOfRange);
        }
        return Ok((1..d).map(factor).fold(Rational::one(), |acc, f| acc * f));
    }
    if n < (d - 1) * k + 1 {
        return Err(PermuteError::ParameterOutOfRange);
    }
    let at = |p: usize| (1..=(d - 1).min(p)).map(factor).fold(Rational::one(), |acc, f| acc * f);
    match position {
        Some(p) if p >= n => Err(PermuteError::ParameterOutOfRange),
        Some(p) => Ok(at(p)),
        None => Ok((0..n).map(at).fold(Rational::zero(), |acc, x| acc + x) / int(n as i64)),
    }
}

/// Probability that `f` slots drawn from `m` free ones avoid `u` given nodes.
fn avoid(m: usize, u: usize, f: usize) -> Rational {
    let mut p = Rational::one();
    for j in 0..f {
        if m < u + j + 1 {
            return Rational::zero();
        }
        p *= ratio((m - u - j) as i64, (m - j) as i64);
    }
    p
}

/// Exact probability that relaxation edge `edge` survives the window filter
/// when the unassigned positions of `assignment` (position → node) are
/// filled uniformly at random with the unplaced nodes.
pub fn conditional_survival(
    inst: &Instance,
    relaxed: &[usize],
    assignment: &[Option<usize>],
    edge: usize,
) -> Rational {
    let n = inst.n();
    let e = inst.edge(edge);
    let mut pos = vec![None; n];
    for (p, s) in assignment.iter().enumerate() {
        if let Some(s) = *s {
            pos[s] = Some(p);
        }
    }
    let mut others_placed = vec![false; n];
    let mut unplaced_others = 0;
    for &id in inst.edges_at_t(e.t) {
        let s = inst.edge(id).s;
        if s == e.s || !relaxed.contains(&id) {
            continue;
        }
        match pos[s] {
            Some(p) => others_placed[p] = true,
            None => unplaced_others += 1,
        }
    }
    let free: Vec<usize> = (0..n).filter(|&p| assignment[p].is_none()).collect();
    let m = free.len();
    let at = |p: usize, remaining: usize| -> Rational {
        let mut f = 0;
        for q in preceding(n, inst.d(), inst.is_cyclic(), p) {
            if others_placed[q] {
                return Rational::zero();
            }
            if assignment[q].is_none() {
                f += 1;
            }
        }
        avoid(remaining, unplaced_others, f)
    };
    match pos[e.s] {
        Some(p) => at(p, m),
        None => {
            let total =
                free.iter().map(|&p| at(p, m - 1)).fold(Rational::zero(), |acc, x| acc + x);
            total / int(m as i64)
        }
    }
}

fn conditional_expectation(
    inst: &Instance,
    relaxed: &[usize],
    assignment: &[Option<usize>],
) -> Rational {
    relaxed.iter().fold(Rational::zero(), |acc, &id| {
        acc + &inst.edge(id).weight * conditional_survival(inst, relaxed, assignment, id)
    })
}

fn from_filter(
    inst: &Instance,
    order: Vec<usize>,
    relaxed: &[usize],
    relaxed_weight: Rational,
    k: u32,
    method: Method,
    seed: Option<u64>,
) -> PermutationResult {
    let order = if inst.is_cyclic() { canonical_cyclic(&order) } else { order };
    let matching = window_filter(inst, relaxed, &order);
    let value = matching.weight(inst);
    PermutationResult {
        order,
        cyclic: inst.is_cyclic(),
        matching,
        value,
        method,
        seed,
        bound: Some(BoundCertificate::Factor(analytic_bound(
            inst.d(),
            k as usize,
            inst.is_cyclic(),
        ))),
        relaxation_weight: Some(relaxed_weight),
    }
}

/// Uniform order of `0..n` from a seeded ChaCha8 generator (Fisher–Yates).
pub fn random_order(n: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    order
}

/// The randomized algorithm (cyclic or not, following the instance) with a
/// seeded uniform order.
pub fn randomized_permutation(inst: &Instance, seed: u64) -> Result<PermutationResult, PermuteError> {
    let (relaxed, weight, k) = relaxation(inst)?;
    let order = random_order(inst.n(), seed);
    Ok(from_filter(inst, order, &relaxed, weight, k, Method::Randomized, Some(seed)))
}

/// Derandomized algorithm: fills positions left to right, each time placing
/// the node that maximizes the conditional expected weight (smallest node
/// on ties). Cyclic orders start with node 0, which loses nothing by
/// rotational symmetry.
pub fn derandomized_permutation(inst: &Instance) -> Result<PermutationResult, PermuteError> {
    let (relaxed, weight, k) = relaxation(inst)?;
    let n = inst.n();
    let mut assignment: Vec<Option<usize>> = vec![None; n];
    let mut placed = vec![false; n];
    for p in 0..n {
        if inst.is_cyclic() && p == 0 {
            assignment[0] = Some(0);
            placed[0] = true;
            continue;
        }
        let mut best: Option<(Rational, usize)> = None;
        for s in (0..n).filter(|&s| !placed[s]) {
            assignment[p] = Some(s);
            let value = conditional_expectation(inst, &relaxed, &assignment);
            if best.as_ref().is_none_or(|(b, _)| value > *b) {
                best = Some((value, s));
            }
        }
        let (_, s) = best.expect("an unplaced node remains");
        assignment[p] = Some(s);
        placed[s] = true;
    }
    let order = assignment.into_iter().map(|s| s.expect("complete")).collect();
    Ok(from_filter(inst, order, &relaxed, weight, k, Method::Derandomized, None))
}

/// Greedy under a fixed order: right nodes in index order, each scanning its
/// candidate edges by position and keeping an edge when both endpoints have
/// residual capacity and no kept edge at the same right node conflicts with
/// it. Candidates default to all edges.
pub fn t_greedy(inst: &Instance, order: &[usize], candidates: Option<&[usize]>) -> Matching {
    let n = inst.n();
    let pos = positions_of(order, n).expect("order is a permutation");
    let allowed: Option<Vec<bool>> = candidates.map(|c| {
        let mut mask = vec![false; inst.edge_count()];
        for &id in c {
            mask[id] = true;
        }
        mask
    });
    let mut deg_s = vec![0usize; n];
    let mut kept = Vec::new();
    for t in 0..inst.t_count() {
        let mut at_t: Vec<(usize, usize)> = inst
            .edges_at_t(t)
            .iter()
            .filter(|&&id| allowed.as_ref().is_none_or(|m| m[id]))
            .map(|&id| (pos[inst.edge(id).s], id))
            .collect();
        at_t.sort_unstable();
        let mut chosen: Vec<usize> = Vec::new();
        for (p, id) in at_t {
            let s = inst.edge(id).s;
            if deg_s[s] >= inst.b_s()[s] as usize || !inst.b_t()[t].allows(chosen.len() + 1) {
                continue;
            }
            if chosen.iter().any(|&q| inst.distance_conflict(p, q).is_some()) {
                continue;
            }
            chosen.push(p);
            deg_s[s] += 1;
            kept.push(id);
        }
    }
    Matching::from_edges(inst, kept).expect("valid edge ids")
}

/// Greedy on the relaxation under a seeded uniform order.
pub fn t_greedy_permutation(inst: &Instance, seed: u64) -> Result<PermutationResult, PermuteError> {
    let (relaxed, weight, _) = relaxation(inst)?;
    let order = random_order(inst.n(), seed);
    let order = if inst.is_cyclic() { canonical_cyclic(&order) } else { order };
    let matching = t_greedy(inst, &order, Some(&relaxed));
    let value = matching.weight(inst);
    Ok(PermutationResult {
        order,
        cyclic: inst.is_cyclic(),
        matching,
        value,
        method: Method::TGreedy,
        seed: Some(seed),
        bound: None,
        relaxation_weight: Some(weight),
    })
}

/// Advances to the next permutation in lexicographic order.
pub fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Calls `f` on every order; cyclic instances get one representative per
/// rotation class (node 0 first).
pub fn for_each_order(n: usize, cyclic: bool, mut f: impl FnMut(&[usize])) {
    if cyclic && n > 0 {
        let mut rest: Vec<usize> = (1..n).collect();
        let mut order = vec![0; n];
        loop {
            order[1..].copy_from_slice(&rest);
            f(&order);
            if !next_permutation(&mut rest) {
                break;
            }
        }
    } else {
        let mut order: Vec<usize> = (0..n).collect();
        loop {
            f(&order);
            if !next_permutation(&mut order) {
                break;
            }
        }
    }
}

fn check_enumerable(inst: &Instance) -> Result<(), PermuteError> {
    if inst.n() > ENUMERATION_LIMIT {
        return Err(PermuteError::InstanceTooLarge { n: inst.n(), limit: ENUMERATION_LIMIT });
    }
    Ok(())
}

/// Best order by exhaustive enumeration, each order solved exactly. The
/// first optimal order in lexicographic order is returned.
pub fn best_permutation_bruteforce(inst: &Instance) -> Result<PermutationResult, PermuteError> {
    check_enumerable(inst)?;
    let mut best: Option<(Rational, Vec<usize>, Matching)> = None;
    let mut failure = None;
    for_each_order(inst.n(), inst.is_cyclic(), |order| {
        if failure.is_some() {
            return;
        }
        let permuted = inst.permuted(order).expect("order is a permutation");
        match solve_bruteforce(&permuted) {
            Ok(m) => {
                let w = m.weight(inst);
                if best.as_ref().is_none_or(|(b, _, _)| w > *b) {
                    best = Some((w, order.to_vec(), m));
                }
            }
            Err(e) => failure = Some(e),
        }
    });
    if let Some(e) = failure {
        return Err(e.into());
    }
    let (value, order, matching) = best.expect("at least one order");
    Ok(PermutationResult {
        order,
        cyclic: inst.is_cyclic(),
        matching,
        value,
        method: Method::BruteForce,
        seed: None,
        bound: Some(BoundCertificate::Optimal),
        relaxation_weight: None,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algorithm {
    /// Window filter over uniform cyclic orders.
    Alg1,
    /// Window filter over uniform linear orders.
    Alg2,
    /// Greedy on the relaxation over uniform orders.
    TGreedy,
}

/// Exact expected weight of a randomized algorithm, by enumerating every
/// order. `Alg1` needs a cyclic instance and `Alg2` a non-cyclic one.
pub fn expected_weight_enumeration(
    inst: &Instance,
    alg: Algorithm,
) -> Result<Rational, PermuteError> {
    check_enumerable(inst)?;
    match (alg, inst.is_cyclic()) {
        (Algorithm::Alg1, false) => {
            return Err(PermuteError::PreconditionViolated("Alg1 works on cyclic orders"))
        }
        (Algorithm::Alg2, true) => {
            return Err(PermuteError::PreconditionViolated("Alg2 works on linear orders"))
        }
        _ => {}
    }
    let (relaxed, _, _) = relaxation(inst)?;
    let mut total = Rational::zero();
    let mut count = 0i64;
    for_each_order(inst.n(), inst.is_cyclic(), |order| {
        let m = match alg {
            Algorithm::TGreedy => t_greedy(inst, order, Some(&relaxed)),
            _ => window_filter(inst, &relaxed, order),
        };
        total += m.weight(inst);
        count += 1;
    });
    Ok(total / int(count))
}
