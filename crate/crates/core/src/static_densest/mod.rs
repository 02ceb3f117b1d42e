//! Densest subgraphs of static graphs.
//!
//! Density is `|E(H)| / |V(H)|`. The generalized objective adds a per-node
//! term: with gains `δ_v ≥ 0` and coupling `λ`, the generalized degree is
//! `deg_a(v | H) = deg(v | H) + 2λ|V(H)|δ_v` and the score is
//! `dens_a(H) = |E(H)|/|V(H)| + λ Σ_{v∈H} δ_v`, half the mean generalized degree.

mod flow;

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::coverage::CoverFn;
use crate::error::{Error, Result};
use crate::temporal_graph::{NodeId, StaticGraph};
use flow::Dinic;

/// Largest graph the exhaustive solvers accept.
pub const BRUTE_FORCE_LIMIT: usize = 20;

/// A chosen subgraph, identified by its node set.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct DensestResult {
    /// Sorted node ids.
    pub nodes: Vec<NodeId>,
    /// `|E(H)| / |V(H)|`, 0 for the empty set.
    pub density: f64,
    /// Generalized score `dens_a(H)`; equals `density` without node weights.
    pub score: f64,
    /// Certified optimal for its objective.
    pub exact: bool,
}

impl DensestResult {
    pub fn empty(exact: bool) -> Self {
        Self {
            nodes: Vec::new(),
            density: 0.0,
            score: 0.0,
            exact,
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Per-node additive gain `δ_v` of the generalized degree.
pub trait NodeGain: Send + Sync {
    fn gain(&self, v: NodeId) -> f64;
}

impl<F> NodeGain for F
where
    F: Fn(NodeId) -> f64 + Send + Sync,
{
    fn gain(&self, v: NodeId) -> f64 {
        self(v)
    }
}

/// Gains from a lookup table, with a fallback for unlisted nodes.
#[derive(Debug, Clone, Default)]
pub struct GainTable {
    pub table: HashMap<NodeId, f64>,
    pub default: f64,
}

impl NodeGain for GainTable {
    fn gain(&self, v: NodeId) -> f64 {
        self.table.get(&v).copied().unwrap_or(self.default)
    }
}

/// Coupling weight `λ` together with the node gains `δ_v`.
#[derive(Clone)]
pub struct NodeWeights {
    lambda: f64,
    gain: Arc<dyn NodeGain>,
}

impl fmt::Debug for NodeWeights {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NodeWeights")
            .field("lambda", &self.lambda)
            .finish_non_exhaustive()
    }
}

impl NodeWeights {
    pub fn new(lambda: f64, gain: Arc<dyn NodeGain>) -> Result<Self> {
        if !(lambda >= 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "lambda must be >= 0, got {lambda}"
            )));
        }
        Ok(Self { lambda, gain })
    }

    /// Same gain `delta` on every node.
    pub fn uniform(lambda: f64, delta: f64) -> Result<Self> {
        Self::new(lambda, Arc::new(move |_v: NodeId| delta))
    }

    pub fn from_table(lambda: f64, table: HashMap<NodeId, f64>, default: f64) -> Result<Self> {
        Self::new(lambda, Arc::new(GainTable { table, default }))
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn gain(&self, v: NodeId) -> f64 {
        self.gain.gain(v)
    }

    /// Gains for every node of `h`, indexed locally. Negative gains are rejected.
    pub fn gains_for(&self, h: &StaticGraph) -> Result<Vec<f64>> {
        h.nodes()
            .iter()
            .map(|&v| {
                let g = self.gain(v);
                if g < 0.0 || g.is_nan() {
                    Err(Error::NegativeGain { node: v, gain: g })
                } else {
                    Ok(g)
                }
            })
            .collect()
    }
}

/// `dens_a` of the induced subgraph on `nodes`.
pub fn generalized_score(h: &StaticGraph, nodes: &[NodeId], w: Option<&NodeWeights>) -> f64 {
    if nodes.is_empty() {
        return 0.0;
    }
    let base = h.density_of(nodes);
    match w {
        Some(w) if w.lambda() > 0.0 => {
            base + w.lambda() * nodes.iter().map(|&v| w.gain(v)).sum::<f64>()
        }
        _ => base,
    }
}

fn check_brute_force_size(h: &StaticGraph) -> Result<()> {
    if h.node_count() > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge {
            what: "exhaustive densest subgraph",
            limit: BRUTE_FORCE_LIMIT,
            actual: h.node_count(),
        });
    }
    Ok(())
}

fn adjacency_masks(h: &StaticGraph) -> Vec<u32> {
    h.adjacency()
        .iter()
        .map(|nbrs| nbrs.iter().fold(0u32, |m, &b| m | (1 << b)))
        .collect()
}

fn edges_in_mask(adj: &[u32], mask: u32) -> u32 {
    let mut twice = 0;
    let mut rest = mask;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        twice += (adj[v] & mask).count_ones();
        rest &= rest - 1;
    }
    twice / 2
}

fn mask_nodes(h: &StaticGraph, mask: u32) -> Vec<NodeId> {
    (0..h.node_count())
        .filter(|&i| mask & (1 << i) != 0)
        .map(|i| h.node(i))
        .collect()
}

/// `true` when the sorted local-index list of `a` precedes that of `b`.
fn lex_less(a: u32, b: u32) -> bool {
    let (mut x, mut y) = (a, b);
    loop {
        match (x, y) {
            (0, 0) => return false,
            (0, _) => return true,
            (_, 0) => return false,
            _ => {}
        }
        let (ix, iy) = (x.trailing_zeros(), y.trailing_zeros());
        if ix != iy {
            return ix < iy;
        }
        x &= x - 1;
        y &= y - 1;
    }
}

/// Exhaustive densest subgraph for graphs of at most [`BRUTE_FORCE_LIMIT`]
/// nodes. Ties go to the lexicographically smallest sorted node set.
pub fn brute_force_densest(h: &StaticGraph) -> Result<DensestResult> {
    check_brute_force_size(h)?;
    let n = h.node_count();
    if n == 0 {
        return Ok(DensestResult::empty(true));
    }
    let adj = adjacency_masks(h);
    let (mut best_mask, mut best_e, mut best_s) = (0u32, 0u64, 1u64);
    for mask in 1u32..(1u32 << n) {
        let e = edges_in_mask(&adj, mask) as u64;
        let s = mask.count_ones() as u64;
        let lhs = e * best_s;
        let rhs = best_e * s;
        if best_mask == 0 || lhs > rhs || (lhs == rhs && lex_less(mask, best_mask)) {
            best_mask = mask;
            best_e = e;
            best_s = s;
        }
    }
    let density = best_e as f64 / best_s as f64;
    Ok(DensestResult {
        nodes: mask_nodes(h, best_mask),
        density,
        score: density,
        exact: true,
    })
}

/// Exhaustive maximizer of `dens_a` (first maximal mask in enumeration order).
pub fn brute_force_generalized(h: &StaticGraph, w: &NodeWeights) -> Result<DensestResult> {
    check_brute_force_size(h)?;
    let gains = w.gains_for(h)?;
    let n = h.node_count();
    if n == 0 {
        return Ok(DensestResult::empty(true));
    }
    let adj = adjacency_masks(h);
    let (mut best_mask, mut best_score, mut best_density) = (0u32, f64::NEG_INFINITY, 0.0);
    for mask in 1u32..(1u32 << n) {
        let e = edges_in_mask(&adj, mask) as f64;
        let s = mask.count_ones() as f64;
        let mut gain_sum = 0.0;
        let mut rest = mask;
        while rest != 0 {
            gain_sum += gains[rest.trailing_zeros() as usize];
            rest &= rest - 1;
        }
        let score = e / s + w.lambda() * gain_sum;
        if score > best_score {
            best_mask = mask;
            best_score = score;
            best_density = e / s;
        }
    }
    Ok(DensestResult {
        nodes: mask_nodes(h, best_mask),
        density: best_density,
        score: best_score,
        exact: true,
    })
}

/// Charikar's greedy peeling: repeatedly drop a minimum-degree node (smallest id
/// on ties) and keep the densest intermediate graph.
pub fn charikar_peel(h: &StaticGraph) -> DensestResult {
    charikar_peel_trace(h).0
}

/// [`charikar_peel`] together with the node removal order.
pub fn charikar_peel_trace(h: &StaticGraph) -> (DensestResult, Vec<NodeId>) {
    let n = h.node_count();
    if n == 0 {
        return (DensestResult::empty(false), Vec::new());
    }
    let mut deg: Vec<usize> = (0..n).map(|i| h.degree(i)).collect();
    let mut queue: BTreeSet<(usize, usize)> = (0..n).map(|i| (deg[i], i)).collect();
    let mut alive = vec![true; n];
    let mut edges = h.edge_count();
    let mut remaining = n;
    let (mut best_e, mut best_s, mut best_step) = (edges, n, 0usize);
    let mut order = Vec::with_capacity(n);

    while let Some((d, v)) = queue.pop_first() {
        debug_assert_eq!(d, deg[v]);
        alive[v] = false;
        order.push(v);
        edges -= d;
        remaining -= 1;
        for &u in h.neighbors(v) {
            if alive[u] {
                queue.remove(&(deg[u], u));
                deg[u] -= 1;
                queue.insert((deg[u], u));
            }
        }
        if remaining > 0 && edges * best_s > best_e * remaining {
            best_e = edges;
            best_s = remaining;
            best_step = order.len();
        }
    }

    let mut nodes: Vec<NodeId> = order[best_step..].iter().map(|&i| h.node(i)).collect();
    nodes.sort_unstable();
    let density = best_e as f64 / best_s as f64;
    let trace = order.iter().map(|&i| h.node(i)).collect();
    (
        DensestResult {
            nodes,
            density,
            score: density,
            exact: false,
        },
        trace,
    )
}

/// Exact densest subgraph through Goldberg's min-cut construction.
///
/// Starting from the peeling solution, each round tests the current density
/// `e/s` as the guess `g`: capacities are scaled by `s` so they stay integral,
/// and a cut below `m·n·s` exposes a strictly denser set which becomes the next
/// guess. When no denser set exists the residual network yields the maximal
/// densest subgraph (the union of all maximizers), which is what is returned.
pub fn exact_densest(h: &StaticGraph) -> DensestResult {
    let n = h.node_count();
    if n == 0 {
        return DensestResult::empty(true);
    }
    let m = h.edge_count() as i64;
    if m == 0 {
        return DensestResult {
            nodes: h.nodes().to_vec(),
            density: 0.0,
            score: 0.0,
            exact: true,
        };
    }

    let peel = charikar_peel(h);
    let mut e = h.edges_within(&peel.nodes) as i64;
    let mut s = peel.nodes.len() as i64;
    let source = n;
    let sink = n + 1;

    loop {
        let mut net = Dinic::new(n + 2);
        for v in 0..n {
            let d = h.degree(v) as i64;
            net.add_edge(source, v, m * s);
            net.add_edge(v, sink, m * s + 2 * e - d * s);
        }
        for &(a, b) in h.local_edges() {
            net.add_pair(a, b, s, s);
        }
        let cut = net.max_flow(source, sink);
        if cut < m * n as i64 * s {
            let side = net.reachable_from(source);
            let members: Vec<usize> = (0..n).filter(|&v| side[v]).collect();
            let ids: Vec<NodeId> = members.iter().map(|&v| h.node(v)).collect();
            let new_e = h.edges_within(&ids) as i64;
            let new_s = members.len() as i64;
            debug_assert!(new_e * s > e * new_s, "cut must expose a denser set");
            e = new_e;
            s = new_s;
            continue;
        }
        let to_sink = net.reaching(sink);
        let nodes: Vec<NodeId> = (0..n).filter(|&v| !to_sink[v]).map(|v| h.node(v)).collect();
        let density = e as f64 / s as f64;
        debug_assert_eq!(h.edges_within(&nodes) as i64 * s, e * nodes.len() as i64);
        return DensestResult {
            nodes,
            density,
            score: density,
            exact: true,
        };
    }
}

/// Greedy peeling for the generalized objective: drop the node with the least
/// `deg_a(v | H)` (smallest id on ties), recomputing every `deg_a` after each
/// removal because `|V(H)|` shrinks. Quadratic in the node count.
pub fn static_greedy_generalized(h: &StaticGraph, w: &NodeWeights) -> Result<DensestResult> {
    Ok(static_greedy_generalized_trace(h, w)?.0)
}

/// [`static_greedy_generalized`] together with the removal order.
pub fn static_greedy_generalized_trace(
    h: &StaticGraph,
    w: &NodeWeights,
) -> Result<(DensestResult, Vec<NodeId>)> {
    let gains = w.gains_for(h)?;
    let lambda = w.lambda();
    let n = h.node_count();
    if n == 0 {
        return Ok((DensestResult::empty(false), Vec::new()));
    }
    let mut deg: Vec<usize> = (0..n).map(|i| h.degree(i)).collect();
    let mut alive = vec![true; n];
    let mut edges = h.edge_count();
    let mut gain_sum: f64 = gains.iter().sum();
    let mut remaining = n;
    let score = |e: usize, s: usize, g: f64| e as f64 / s as f64 + lambda * g;
    let mut best = (score(edges, n, gain_sum), edges, n, 0usize);
    let mut order = Vec::with_capacity(n);

    while remaining > 0 {
        let size_term = 2.0 * lambda * remaining as f64;
        let mut pick = usize::MAX;
        let mut pick_val = f64::INFINITY;
        for v in 0..n {
            if alive[v] {
                let val = deg[v] as f64 + size_term * gains[v];
                if val < pick_val {
                    pick_val = val;
                    pick = v;
                }
            }
        }
        alive[pick] = false;
        order.push(pick);
        edges -= deg[pick];
        gain_sum -= gains[pick];
        remaining -= 1;
        for &u in h.neighbors(pick) {
            if alive[u] {
                deg[u] -= 1;
            }
        }
        if remaining > 0 {
            // recompute the gain sum exactly to avoid drift over long peels
            if order.len() % 64 == 0 {
                gain_sum = (0..n).filter(|&v| alive[v]).map(|v| gains[v]).sum();
            }
            let sc = score(edges, remaining, gain_sum);
            if sc > best.0 {
                best = (sc, edges, remaining, order.len());
            }
        }
    }

    let mut nodes: Vec<NodeId> = order[best.3..].iter().map(|&i| h.node(i)).collect();
    nodes.sort_unstable();
    let density = best.1 as f64 / best.2 as f64;
    let score = generalized_score(h, &nodes, Some(w));
    let trace = order.iter().map(|&i| h.node(i)).collect();
    Ok((
        DensestResult {
            nodes,
            density,
            score,
            exact: false,
        },
        trace,
    ))
}

/// How each greedy round maximizes the marginal gain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InnerSolver {
    /// [`static_greedy_generalized`], a ½-approximation.
    StaticGreedy,
    /// [`brute_force_generalized`]; small graphs only.
    BruteForce,
}

/// Greedy selection of `k` subgraphs for density plus `λ`-weighted cover.
///
/// Round `i` maximizes `χ(H) = d(H) + λ Σ_{v∈H} [w(x_v + 1) − w(x_v)]`, where
/// `x_v` counts earlier selections containing `v`. Subgraphs may repeat.
pub fn greedy_k_static(
    h: &StaticGraph,
    k: usize,
    lambda: f64,
    cover: &CoverFn,
    inner: InnerSolver,
) -> Result<Vec<DensestResult>> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be >= 1".into()));
    }
    let mut counts: HashMap<NodeId, u32> = HashMap::new();
    let mut picked = Vec::with_capacity(k);
    for _ in 0..k {
        let table: HashMap<NodeId, f64> = h
            .nodes()
            .iter()
            .map(|&v| (v, cover.marginal(counts.get(&v).copied().unwrap_or(0))))
            .collect();
        let w = NodeWeights::from_table(lambda, table, cover.marginal(0))?;
        let res = match inner {
            InnerSolver::StaticGreedy => static_greedy_generalized(h, &w)?,
            InnerSolver::BruteForce => brute_force_generalized(h, &w)?,
        };
        for &v in &res.nodes {
            *counts.entry(v).or_insert(0) += 1;
        }
        picked.push(res);
    }
    Ok(picked)
}
