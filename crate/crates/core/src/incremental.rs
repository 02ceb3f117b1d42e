//! Insert-only approximate densest subgraph maintenance with nested level sets.
//!
//! For a profit estimate `β` and accuracy `ε`, the level sets
//! `S_0 ⊇ S_1 ⊇ … ⊇ S_k`, `k = ⌈log_{1+ε} |V|⌉`, are built by threshold
//! peeling: `S_{t+1}` keeps the nodes of `S_t` whose generalized degree in
//! `S_t` reaches `2(1+ε)β`. A node's *level* is the largest `t` with
//! `v ∈ S_t`. Edge insertions only raise degrees, so nodes only move up;
//! a node that would reach level `k` forces a rebuild at a larger `β`.
//!
//! The structure reports a monotone best-so-far subgraph: the densest of the
//! rebuild results and of all level sets seen after any insertion.

use std::collections::{HashMap, HashSet};

use crate::static_densest::{DensestResult, NodeWeights};
use crate::temporal_graph::{NodeId, StaticGraph};

/// Number of levels `⌈log_{1+ε} n⌉`, at least 1.
pub fn level_count(n: usize, eps: f64) -> usize {
    if n <= 1 {
        return 1;
    }
    let k = ((n as f64).ln() / (1.0 + eps).ln()).ceil();
    (k as usize).max(1)
}

/// Level assignment of a graph's nodes for one `β`.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelSets {
    beta: f64,
    eps: f64,
    top: usize,
    level: Vec<usize>,
}

impl LevelSets {
    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// Promotion threshold `2(1+ε)β`.
    pub fn threshold(&self) -> f64 {
        2.0 * (1.0 + self.eps) * self.beta
    }

    /// `k`: the first level that must stay empty.
    pub fn top(&self) -> usize {
        self.top
    }

    /// Level per node, indexed like the graph the sets were built for.
    pub fn levels(&self) -> &[usize] {
        &self.level
    }

    /// Local indices of `S_t`.
    pub fn members(&self, t: usize) -> Vec<usize> {
        (0..self.level.len())
            .filter(|&v| self.level[v] >= t)
            .collect()
    }
}

struct Peel {
    sets: LevelSets,
    best_level: usize,
    best_score: f64,
}

/// One `Find` pass: peel every node whose generalized degree in the current
/// set is below `2(1+ε)β`, for at most `k` rounds, remembering the best set.
fn threshold_peel(adj: &[Vec<usize>], gains: &[f64], lambda: f64, beta: f64, eps: f64) -> Peel {
    let n = adj.len();
    let top = level_count(n, eps);
    let thr = 2.0 * (1.0 + eps) * beta;
    let mut level = vec![0usize; n];
    let mut inside = vec![true; n];
    let mut deg: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut current: Vec<usize> = (0..n).collect();

    let score_of = |set: &[usize], deg: &[usize]| -> f64 {
        if set.is_empty() {
            return 0.0;
        }
        let twice: usize = set.iter().map(|&v| deg[v]).sum();
        let g: f64 = if lambda > 0.0 {
            set.iter().map(|&v| gains[v]).sum()
        } else {
            0.0
        };
        twice as f64 / (2.0 * set.len() as f64) + lambda * g
    };
    let mut best_score = score_of(&current, &deg);
    let mut best_level = 0;

    let mut t = 0;
    while !current.is_empty() && t < top {
        let size_term = 2.0 * lambda * current.len() as f64;
        let (leaving, staying): (Vec<usize>, Vec<usize>) = current
            .iter()
            .partition(|&&v| (deg[v] as f64) + size_term * gains[v] < thr);
        for &v in &leaving {
            inside[v] = false;
        }
        for &v in &leaving {
            for &u in &adj[v] {
                if inside[u] {
                    deg[u] -= 1;
                }
            }
        }
        for &v in &staying {
            level[v] = t + 1;
        }
        current = staying;
        t += 1;
        let sc = score_of(&current, &deg);
        if !current.is_empty() && sc > best_score {
            best_score = sc;
            best_level = t;
        }
    }

    Peel {
        sets: LevelSets {
            beta,
            eps,
            top,
            level,
        },
        best_level,
        best_score,
    }
}

fn gains_or_zero(h: &StaticGraph, w: Option<&NodeWeights>) -> (Vec<f64>, f64) {
    match w {
        Some(w) => {
            let gains = h.nodes().iter().map(|&v| w.gain(v).max(0.0)).collect();
            (gains, w.lambda())
        }
        None => (vec![0.0; h.node_count()], 0.0),
    }
}

fn result_from_level(h: &StaticGraph, sets: &LevelSets, t: usize, score: f64) -> DensestResult {
    let nodes: Vec<NodeId> = sets.members(t).into_iter().map(|v| h.node(v)).collect();
    let density = h.density_of(&nodes);
    DensestResult {
        nodes,
        density,
        score,
        exact: false,
    }
}

/// `Find`: threshold peeling at `β`. If `β ≤ OPT / (2(1+ε))` the returned
/// subgraph scores at least `β`; if `β > OPT` it scores below `β`.
pub fn find(h: &StaticGraph, beta: f64, eps: f64, w: Option<&NodeWeights>) -> DensestResult {
    if h.is_empty() {
        return DensestResult::empty(false);
    }
    let (gains, lambda) = gains_or_zero(h, w);
    let peel = threshold_peel(h.adjacency(), &gains, lambda, beta, eps);
    result_from_level(h, &peel.sets, peel.best_level, peel.best_score)
}

/// Level sets of a full threshold peeling at `β`, indexed by local index of `h`.
pub fn peel(h: &StaticGraph, beta: f64, eps: f64, w: Option<&NodeWeights>) -> LevelSets {
    let (gains, lambda) = gains_or_zero(h, w);
    threshold_peel(h.adjacency(), &gains, lambda, beta, eps).sets
}

/// Outcome of [`find_densest`].
#[derive(Debug, Clone)]
pub struct FindDensest {
    /// Final profit estimate; `OPT < 2(1+ε)β` on return.
    pub beta: f64,
    /// Best subgraph found; empty if the very first probe failed.
    pub result: DensestResult,
    /// Level sets of the last (failing) probe; `S_k` is empty.
    pub levels: LevelSets,
}

fn find_densest_local(
    adj: &[Vec<usize>],
    gains: &[f64],
    lambda: f64,
    rho: f64,
    eps: f64,
) -> (f64, Option<(usize, f64, LevelSets)>, LevelSets) {
    let mut beta = (1.0 / (4.0 * (1.0 + eps))).max((1.0 + eps) * rho);
    let mut best: Option<(usize, f64, LevelSets)> = None;
    loop {
        let peel = threshold_peel(adj, gains, lambda, beta, eps);
        if !adj.is_empty() && peel.best_score >= beta {
            beta = (1.0 + eps) * peel.best_score;
            best = Some((peel.best_level, peel.best_score, peel.sets));
        } else {
            return (beta, best, peel.sets);
        }
    }
}

/// `FindDensest`: starting from `β = max(1/(4(1+ε)), (1+ε)ρ)`, probe with
/// [`find`] and raise `β` to `(1+ε)·score` while probes succeed. The best
/// subgraph is within a factor `2(1+ε)²` of the optimum.
pub fn find_densest(h: &StaticGraph, rho: f64, eps: f64, w: Option<&NodeWeights>) -> FindDensest {
    let (gains, lambda) = gains_or_zero(h, w);
    let (beta, best, levels) = find_densest_local(h.adjacency(), &gains, lambda, rho, eps);
    let result = match best {
        Some((t, score, sets)) => result_from_level(h, &sets, t, score),
        None => DensestResult::empty(false),
    };
    FindDensest {
        beta,
        result,
        levels,
    }
}

/// Best subgraph reported so far; its score never decreases.
#[derive(Debug, Clone, Default, PartialEq, serde::Serialize)]
pub struct MonotoneBest {
    pub score: f64,
    pub density: f64,
    /// Sorted node ids.
    pub nodes: Vec<NodeId>,
}

impl MonotoneBest {
    pub fn to_result(&self) -> DensestResult {
        DensestResult {
            nodes: self.nodes.clone(),
            density: self.density,
            score: self.score,
            exact: false,
        }
    }
}

/// What one call to [`IncrementalDensest::add_edge`] did.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct AddOutcome {
    /// The static pair was already present; nothing changed.
    pub duplicate: bool,
    /// A promotion would have reached the top level; the sets must be rebuilt.
    pub rebuild: bool,
    /// Number of stack pushes.
    pub enqueued: usize,
    /// Number of level promotions applied.
    pub promotions: usize,
}

/// Incremental generalized-density structure.
#[derive(Debug, Clone)]
pub struct IncrementalDensest {
    eps: f64,
    weights: Option<NodeWeights>,
    lambda: f64,
    ids: Vec<NodeId>,
    index: HashMap<NodeId, usize>,
    adj: Vec<Vec<usize>>,
    pairs: HashSet<(NodeId, NodeId)>,
    gains: Vec<f64>,
    edges: usize,
    sets: LevelSets,
    // per exact level: node count, gain sum, edges whose lower endpoint level it is
    at_level_nodes: Vec<usize>,
    at_level_gain: Vec<f64>,
    at_level_edges: Vec<usize>,
    last_rebuild: DensestResult,
    best: MonotoneBest,
    rebuilds: usize,
}

impl IncrementalDensest {
    pub fn new(eps: f64, weights: Option<NodeWeights>) -> Self {
        assert!(eps > 0.0, "eps must be positive");
        let lambda = weights.as_ref().map_or(0.0, NodeWeights::lambda);
        let (beta, _, sets) = find_densest_local(&[], &[], lambda, 0.0, eps);
        debug_assert_eq!(sets.beta, beta);
        let mut s = Self {
            eps,
            weights,
            lambda,
            ids: Vec::new(),
            index: HashMap::new(),
            adj: Vec::new(),
            pairs: HashSet::new(),
            gains: Vec::new(),
            edges: 0,
            sets,
            at_level_nodes: Vec::new(),
            at_level_gain: Vec::new(),
            at_level_edges: Vec::new(),
            last_rebuild: DensestResult::empty(false),
            best: MonotoneBest::default(),
            rebuilds: 0,
        };
        s.recount();
        s
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn beta(&self) -> f64 {
        self.sets.beta
    }

    pub fn levels(&self) -> &LevelSets {
        &self.sets
    }

    pub fn node_count(&self) -> usize {
        self.ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    /// Rebuilds triggered so far (the initial empty build not counted).
    pub fn rebuilds(&self) -> usize {
        self.rebuilds
    }

    pub fn best(&self) -> &MonotoneBest {
        &self.best
    }

    pub fn best_score(&self) -> f64 {
        self.best.score
    }

    /// Result of the most recent rebuild.
    pub fn last_rebuild(&self) -> &DensestResult {
        &self.last_rebuild
    }

    /// Upper estimate of the largest average generalized degree seen.
    pub fn degree_bound(&self) -> usize {
        (2.0 * self.best.score).ceil() as usize
    }

    pub fn level_of(&self, v: NodeId) -> Option<usize> {
        self.index.get(&v).map(|&i| self.sets.level[i])
    }

    /// The current graph as a static graph.
    pub fn static_graph(&self) -> StaticGraph {
        StaticGraph::with_nodes(self.ids.iter().copied(), self.pairs.iter().copied())
    }

    /// Node ids of `S_t`, sorted.
    pub fn level_set(&self, t: usize) -> Vec<NodeId> {
        let mut out: Vec<NodeId> = (0..self.ids.len())
            .filter(|&v| self.sets.level[v] >= t)
            .map(|v| self.ids[v])
            .collect();
        out.sort_unstable();
        out
    }

    /// Insert an edge and rebuild if needed. Returns the low-level outcome;
    /// `rebuild` is true when a rebuild ran.
    pub fn insert(&mut self, u: NodeId, v: NodeId) -> AddOutcome {
        let out = self.add_edge(u, v);
        if out.rebuild {
            self.rebuild();
        }
        if !out.duplicate {
            self.refresh_best();
        }
        out
    }

    /// Alg. `Add`: insert `(u, v)` and propagate promotions through a LIFO
    /// work stack (pending nodes deduplicated). Leaves the sets partially
    /// updated when `rebuild` is reported; call [`Self::rebuild`] then.
    pub fn add_edge(&mut self, u: NodeId, v: NodeId) -> AddOutcome {
        let mut out = AddOutcome::default();
        let key = (u.min(v), u.max(v));
        if u == v || self.pairs.contains(&key) {
            out.duplicate = true;
            return out;
        }
        let (a, new_a) = self.ensure_node(u);
        let (b, new_b) = self.ensure_node(v);
        if new_a || new_b {
            let top = level_count(self.ids.len(), self.eps);
            if top > self.sets.top {
                self.sets.top = top;
                self.grow_counters();
            }
        }
        self.pairs.insert(key);
        self.adj[a].push(b);
        self.adj[b].push(a);
        self.edges += 1;
        let lower = self.sets.level[a].min(self.sets.level[b]);
        self.at_level_edges[lower] += 1;

        let n = self.ids.len();
        let mut pending = vec![false; n];
        let mut stack: Vec<usize> = Vec::new();
        let push =
            |x: usize, stack: &mut Vec<usize>, pending: &mut Vec<bool>, out: &mut AddOutcome| {
                if !pending[x] {
                    pending[x] = true;
                    stack.push(x);
                    out.enqueued += 1;
                }
            };
        if new_a || new_b {
            // a new node changes |V|, and with it every generalized degree
            for x in 0..n {
                push(x, &mut stack, &mut pending, &mut out);
            }
        }
        push(a, &mut stack, &mut pending, &mut out);
        push(b, &mut stack, &mut pending, &mut out);

        let thr = self.sets.threshold();
        while let Some(s) = stack.pop() {
            pending[s] = false;
            let t = self.sets.level[s];
            let hist = self.neighbor_levels(s);
            if self.member_degree(s, t, &hist) < thr {
                continue;
            }
            let mut target = t + 1;
            loop {
                if target >= self.sets.top {
                    out.rebuild = true;
                    return out;
                }
                if self.joining_degree(s, target, &hist) < thr {
                    break;
                }
                target += 1;
            }
            self.promote(s, target);
            out.promotions += 1;
            for i in 0..self.adj[s].len() {
                let x = self.adj[s][i];
                push(x, &mut stack, &mut pending, &mut out);
            }
            if self.lambda > 0.0 {
                // the size term grew for every weighted node on levels t+1..=target
                for x in 0..n {
                    let lx = self.sets.level[x];
                    if lx > t && lx <= target && self.gains[x] > 0.0 {
                        push(x, &mut stack, &mut pending, &mut out);
                    }
                }
            }
        }
        out
    }

    /// Alg. `Update` rebuild step: `FindDensest(H, β, ε)` on the whole graph.
    pub fn rebuild(&mut self) {
        let (beta, best, sets) = find_densest_local(
            &self.adj,
            &self.gains,
            self.lambda,
            self.sets.beta,
            self.eps,
        );
        debug_assert_eq!(beta, sets.beta);
        self.last_rebuild = match best {
            Some((t, score, best_sets)) => {
                let mut nodes: Vec<NodeId> = best_sets
                    .members(t)
                    .into_iter()
                    .map(|v| self.ids[v])
                    .collect();
                nodes.sort_unstable();
                let density = self.density_of_local(&best_sets, t);
                DensestResult {
                    nodes,
                    density,
                    score,
                    exact: false,
                }
            }
            None => DensestResult::empty(false),
        };
        self.sets = sets;
        self.rebuilds += 1;
        self.recount();
    }

    /// Every node satisfies `deg_a(v | S_level(v)) < 2(1+ε)β` and no node sits
    /// on the top level. Returns the offending node on failure.
    pub fn audit(&self) -> Result<(), String> {
        let thr = self.sets.threshold();
        for v in 0..self.ids.len() {
            let t = self.sets.level[v];
            if t >= self.sets.top {
                return Err(format!("node {} on top level {}", self.ids[v], t));
            }
            let hist = self.neighbor_levels(v);
            let d = self.member_degree(v, t, &hist);
            if d >= thr {
                return Err(format!(
                    "node {} at level {} has generalized degree {} >= {}",
                    self.ids[v], t, d, thr
                ));
            }
        }
        let mut fresh = self.clone();
        fresh.recount();
        if fresh.at_level_nodes != self.at_level_nodes
            || fresh.at_level_edges != self.at_level_edges
        {
            return Err("level counters out of sync".into());
        }
        Ok(())
    }

    fn ensure_node(&mut self, v: NodeId) -> (usize, bool) {
        if let Some(&i) = self.index.get(&v) {
            return (i, false);
        }
        let i = self.ids.len();
        self.ids.push(v);
        self.index.insert(v, i);
        self.adj.push(Vec::new());
        let g = match &self.weights {
            Some(w) => w.gain(v).max(0.0),
            None => 0.0,
        };
        self.gains.push(g);
        self.sets.level.push(0);
        self.at_level_nodes[0] += 1;
        self.at_level_gain[0] += g;
        (i, true)
    }

    fn grow_counters(&mut self) {
        let len = self.sets.top + 1;
        self.at_level_nodes.resize(len, 0);
        self.at_level_gain.resize(len, 0.0);
        self.at_level_edges.resize(len, 0);
    }

    fn recount(&mut self) {
        let len = self.sets.top + 1;
        self.at_level_nodes = vec![0; len];
        self.at_level_gain = vec![0.0; len];
        self.at_level_edges = vec![0; len];
        for v in 0..self.ids.len() {
            let t = self.sets.level[v];
            self.at_level_nodes[t] += 1;
            self.at_level_gain[t] += self.gains[v];
        }
        for v in 0..self.ids.len() {
            for &u in &self.adj[v] {
                if v < u {
                    let t = self.sets.level[v].min(self.sets.level[u]);
                    self.at_level_edges[t] += 1;
                }
            }
        }
    }

    /// `hist[t]` = number of neighbours of `s` at level exactly `t`.
    fn neighbor_levels(&self, s: usize) -> Vec<usize> {
        let mut hist = vec![0usize; self.sets.top + 1];
        for &u in &self.adj[s] {
            hist[self.sets.level[u].min(self.sets.top)] += 1;
        }
        hist
    }

    fn size_of(&self, t: usize) -> usize {
        self.at_level_nodes[t.min(self.sets.top)..].iter().sum()
    }

    /// `deg_a(s | S_t)` for `s ∈ S_t`.
    fn member_degree(&self, s: usize, t: usize, hist: &[usize]) -> f64 {
        let deg: usize = hist[t..].iter().sum();
        let mut d = deg as f64;
        if self.lambda > 0.0 {
            d += 2.0 * self.lambda * self.size_of(t) as f64 * self.gains[s];
        }
        d
    }

    /// `deg_a(s | S_t ∪ {s})` for a level `t` above `s`.
    fn joining_degree(&self, s: usize, t: usize, hist: &[usize]) -> f64 {
        let deg: usize = hist[t..].iter().sum();
        let mut d = deg as f64;
        if self.lambda > 0.0 {
            d += 2.0 * self.lambda * (self.size_of(t) + 1) as f64 * self.gains[s];
        }
        d
    }

    fn promote(&mut self, s: usize, target: usize) {
        let from = self.sets.level[s];
        self.at_level_nodes[from] -= 1;
        self.at_level_nodes[target] += 1;
        self.at_level_gain[from] -= self.gains[s];
        self.at_level_gain[target] += self.gains[s];
        for &u in &self.adj[s] {
            let lu = self.sets.level[u];
            let old = from.min(lu);
            let new = target.min(lu);
            if old != new {
                self.at_level_edges[old] -= 1;
                self.at_level_edges[new] += 1;
            }
        }
        self.sets.level[s] = target;
    }

    fn density_of_local(&self, sets: &LevelSets, t: usize) -> f64 {
        let members = sets.members(t);
        if members.is_empty() {
            return 0.0;
        }
        let twice: usize = members
            .iter()
            .map(|&v| self.adj[v].iter().filter(|&&u| sets.level[u] >= t).count())
            .sum();
        twice as f64 / (2.0 * members.len() as f64)
    }

    fn refresh_best(&mut self) {
        if self.last_rebuild.score > self.best.score {
            self.best = MonotoneBest {
                score: self.last_rebuild.score,
                density: self.last_rebuild.density,
                nodes: self.last_rebuild.nodes.clone(),
            };
        }
        // scan the level sets from the top down using suffix sums
        let (mut nodes, mut edges, mut gain) = (0usize, 0usize, 0.0f64);
        let mut pick: Option<(usize, f64, f64)> = None;
        for t in (0..=self.sets.top).rev() {
            nodes += self.at_level_nodes[t];
            edges += self.at_level_edges[t];
            gain += self.at_level_gain[t];
            if nodes == 0 {
                continue;
            }
            let density = edges as f64 / nodes as f64;
            let score = density + self.lambda * gain;
            if score > self.best.score && pick.is_none_or(|(_, s, _)| score > s) {
                pick = Some((t, score, density));
            }
        }
        if let Some((t, score, density)) = pick {
            self.best = MonotoneBest {
                score,
                density,
                nodes: self.level_set(t),
            };
        }
    }
}

/// Feed `edges` one by one and collect the reported best after each insertion.
pub fn update_stream<I>(edges: I, eps: f64, w: Option<NodeWeights>) -> Vec<MonotoneBest>
where
    I: IntoIterator<Item = (NodeId, NodeId)>,
{
    let mut inc = IncrementalDensest::new(eps, w);
    edges
        .into_iter()
        .map(|(u, v)| {
            inc.insert(u, v);
            inc.best().clone()
        })
        .collect()
}
