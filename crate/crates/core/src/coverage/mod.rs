//! Coverage-aware episodes: density plus a concave reward for covering
//! nodes that earlier episodes have not used much.
//!
//! With `x_v` the number of selected subgraphs containing `v`, the cover of a
//! selection is `Σ_v w(x_v)`. A new subgraph `H` gains
//! `χ(H) = d(H) + λ Σ_{v∈H} [w(x_v + 1) − w(x_v)]`.

mod sketch;

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::rc::Rc;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::incremental::IncrementalDensest;
use crate::segmentation::{
    check_eps, check_k, cover_timeline, run_skeleton, CandidateSource, DpStats, Episode, Mode,
    SegmentParams, Segmentation, Step,
};
use crate::static_densest::{static_greedy_generalized, DensestResult, NodeWeights};
use crate::temporal_graph::{Interval, NodeId, StaticGraph, TemporalGraph};

pub use sketch::CountMinSketch;

/// Concave, non-decreasing `w` with `w(0) = 0`.
#[derive(Clone)]
pub enum CoverFn {
    /// `w(x) = 1` for `x ≥ 1`: counts distinct covered nodes.
    Indicator,
    /// `w(x) = √x`.
    Sqrt,
    /// User-supplied; must be concave and non-decreasing on integers.
    Custom(Arc<dyn Fn(u32) -> f64 + Send + Sync>),
}

impl fmt::Debug for CoverFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl CoverFn {
    pub fn eval(&self, x: u32) -> f64 {
        match self {
            CoverFn::Indicator => {
                if x > 0 {
                    1.0
                } else {
                    0.0
                }
            }
            CoverFn::Sqrt => (x as f64).sqrt(),
            CoverFn::Custom(f) => f(x),
        }
    }

    /// `w(x + 1) − w(x)`.
    pub fn marginal(&self, x: u32) -> f64 {
        self.eval(x.saturating_add(1)) - self.eval(x)
    }

    pub fn name(&self) -> &'static str {
        match self {
            CoverFn::Indicator => "indicator",
            CoverFn::Sqrt => "sqrt",
            CoverFn::Custom(_) => "custom",
        }
    }
}

impl FromStr for CoverFn {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "indicator" => Ok(CoverFn::Indicator),
            "sqrt" => Ok(CoverFn::Sqrt),
            _ => Err(Error::InvalidParameter(format!(
                "unknown cover function '{s}'"
            ))),
        }
    }
}

/// Dimensions and hash seed of an opt-in count-min sketch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SketchParams {
    pub width: usize,
    pub depth: usize,
    pub seed: u64,
}

impl SketchParams {
    pub fn from_error(eps: f64, delta: f64, seed: u64) -> Result<Self> {
        let s = CountMinSketch::new(eps, delta, seed)?;
        Ok(Self {
            width: s.width(),
            depth: s.depth(),
            seed,
        })
    }
}

#[derive(Debug, Clone)]
enum Counts {
    Exact(HashMap<NodeId, u32>),
    Sketch(CountMinSketch),
}

/// Selection counts `x_v` with a cover function and `λ`.
#[derive(Debug, Clone)]
pub struct CoverState {
    counts: Counts,
    touched: BTreeSet<NodeId>,
    w: CoverFn,
    lambda: f64,
}

impl CoverState {
    pub fn new(w: CoverFn, lambda: f64) -> Self {
        Self {
            counts: Counts::Exact(HashMap::new()),
            touched: BTreeSet::new(),
            w,
            lambda,
        }
    }

    pub fn with_sketch(w: CoverFn, lambda: f64, params: SketchParams) -> Self {
        Self {
            counts: Counts::Sketch(CountMinSketch::with_dimensions(
                params.width,
                params.depth,
                params.seed,
            )),
            touched: BTreeSet::new(),
            w,
            lambda,
        }
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn cover_fn(&self) -> &CoverFn {
        &self.w
    }

    /// `x_v`, estimated from above in sketch mode.
    pub fn count(&self, v: NodeId) -> u32 {
        match &self.counts {
            Counts::Exact(m) => m.get(&v).copied().unwrap_or(0),
            Counts::Sketch(s) => s.query(v).min(u32::MAX as u64) as u32,
        }
    }

    /// Record one more selected subgraph with node set `nodes`.
    pub fn add(&mut self, nodes: &[NodeId]) {
        for &v in nodes {
            match &mut self.counts {
                Counts::Exact(m) => *m.entry(v).or_insert(0) += 1,
                Counts::Sketch(s) => s.update(v),
            }
            self.touched.insert(v);
        }
    }

    /// `δ_v = w(x_v + 1) − w(x_v)`.
    pub fn marginal(&self, v: NodeId) -> f64 {
        self.w.marginal(self.count(v))
    }

    /// `λ` and `δ_v` as generalized-degree weights.
    pub fn weights(&self) -> NodeWeights {
        let w = self.w.clone();
        let built = match &self.counts {
            Counts::Exact(m) => {
                let table = m.iter().map(|(&v, &x)| (v, w.marginal(x))).collect();
                NodeWeights::from_table(self.lambda, table, w.marginal(0))
            }
            Counts::Sketch(s) => {
                let s = s.clone();
                NodeWeights::new(
                    self.lambda,
                    Arc::new(move |v: NodeId| w.marginal(s.query(v).min(u32::MAX as u64) as u32)),
                )
            }
        };
        built.expect("lambda validated on construction")
    }

    /// Same function, `λ` and sketch hashes; no selections.
    pub fn cleared(&self) -> Self {
        Self {
            counts: match &self.counts {
                Counts::Exact(_) => Counts::Exact(HashMap::new()),
                Counts::Sketch(s) => Counts::Sketch(s.cleared()),
            },
            touched: BTreeSet::new(),
            w: self.w.clone(),
            lambda: self.lambda,
        }
    }
}

/// `Σ_v w(x_v)` over nodes selected at least once.
pub fn cover_value(state: &CoverState) -> f64 {
    state
        .touched
        .iter()
        .map(|&v| state.w.eval(state.count(v)))
        .sum()
}

/// Cover of a collection of node sets under `w`.
pub fn cover_of(sets: &[Vec<NodeId>], w: &CoverFn) -> f64 {
    let mut state = CoverState::new(w.clone(), 0.0);
    for s in sets {
        state.add(s);
    }
    cover_value(&state)
}

/// `χ(h) = d(h) + λ Σ_{v∈h} δ_v` for the whole graph `h`.
pub fn marginal_gain_chi(h: &StaticGraph, state: &CoverState) -> f64 {
    if h.is_empty() {
        return 0.0;
    }
    let d = h.edge_count() as f64 / h.node_count() as f64;
    d + state.lambda * h.nodes().iter().map(|&v| state.marginal(v)).sum::<f64>()
}

/// Approximate `max χ` over subgraphs of `iv`'s induced graph, using the
/// incremental generalized structure on the interval's edge stream.
pub fn gain_interval(
    g: &TemporalGraph,
    iv: Interval,
    state: &CoverState,
    eps_ds: f64,
) -> (f64, Vec<NodeId>) {
    let mut inc = IncrementalDensest::new(eps_ds, Some(state.weights()));
    for e in g.edge_stream(iv).filter(|e| !e.duplicate) {
        inc.insert(e.u, e.v);
    }
    let best = inc.best();
    (best.score, best.nodes.clone())
}

/// One-off `max χ` of an interval via the quadratic peeling greedy.
pub fn gain_interval_static(
    g: &TemporalGraph,
    iv: Interval,
    state: &CoverState,
) -> Result<DensestResult> {
    static_greedy_generalized(&g.induced_static(iv), &state.weights())
}

/// Jaccard similarity of two sorted sets; 0 when both are empty.
pub fn jaccard<T: Ord>(a: &[T], b: &[T]) -> f64 {
    let (mut i, mut j, mut common) = (0, 0, 0usize);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                common += 1;
                i += 1;
                j += 1;
            }
        }
    }
    let union = a.len() + b.len() - common;
    if union == 0 {
        0.0
    } else {
        common as f64 / union as f64
    }
}

/// Mean Jaccard similarity over unordered pairs; 0 with fewer than two sets.
pub fn mean_pairwise_jaccard<T: Ord>(sets: &[Vec<T>]) -> f64 {
    let mut sum = 0.0;
    let mut pairs = 0usize;
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            sum += jaccard(&sets[i], &sets[j]);
            pairs += 1;
        }
    }
    if pairs == 0 {
        0.0
    } else {
        sum / pairs as f64
    }
}

/// Cover function, `λ` and optional sketching for [`kgcvr_segment`].
#[derive(Debug, Clone)]
pub struct CoverConfig {
    pub w: CoverFn,
    pub lambda: f64,
    pub sketch: Option<SketchParams>,
}

impl CoverConfig {
    pub fn new(w: CoverFn, lambda: f64) -> Self {
        Self {
            w,
            lambda,
            sketch: None,
        }
    }

    fn fresh_state(&self) -> CoverState {
        match self.sketch {
            Some(p) => CoverState::with_sketch(self.w.clone(), self.lambda, p),
            None => CoverState::new(self.w.clone(), self.lambda),
        }
    }
}

/// Summary metrics of a coverage-aware segmentation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverReport {
    pub lambda: f64,
    pub cover_fn: String,
    /// `Σ χ` over episodes, in order.
    pub objective: f64,
    /// Mean episode density.
    pub mean_density: f64,
    /// Exact `Σ_v w(x_v)` of the episode node sets.
    pub cover: f64,
    pub mean_jaccard: f64,
    pub mean_size: f64,
}

impl CoverReport {
    pub fn from_episodes(episodes: &[Episode], config: &CoverConfig) -> Self {
        let sets: Vec<Vec<NodeId>> = episodes.iter().map(|e| e.nodes.clone()).collect();
        let n = episodes.len().max(1) as f64;
        Self {
            lambda: config.lambda,
            cover_fn: config.w.name().to_string(),
            objective: episodes.iter().map(|e| e.score).sum(),
            mean_density: episodes.iter().map(|e| e.density).sum::<f64>() / n,
            cover: cover_of(&sets, &config.w),
            mean_jaccard: mean_pairwise_jaccard(&sets),
            mean_size: sets.iter().map(Vec::len).sum::<usize>() as f64 / n,
        }
    }
}

struct CoverSource<'a> {
    g: &'a TemporalGraph,
    eps: f64,
    base: CoverState,
}

impl CandidateSource for CoverSource<'_> {
    type Cand = IncrementalDensest;

    fn open(&mut self, _a: usize, prefix: Option<&Rc<Step>>) -> IncrementalDensest {
        let mut state = self.base.cleared();
        if let Some(p) = prefix {
            for s in p.chain() {
                state.add(&s.nodes);
            }
        }
        IncrementalDensest::new(self.eps, Some(state.weights()))
    }

    fn extend(&mut self, cand: &mut IncrementalDensest, t: usize, stats: &mut DpStats) {
        for e in self.g.edges_at(t) {
            cand.insert(e.u, e.v);
            stats.edge_insertions += 1;
        }
    }

    fn score(&mut self, cand: &IncrementalDensest, _stats: &mut DpStats) -> f64 {
        cand.best_score()
    }

    fn nodes(&mut self, cand: &IncrementalDensest) -> Vec<NodeId> {
        cand.best().nodes.clone()
    }

    fn close(&mut self, cand: IncrementalDensest, stats: &mut DpStats) {
        stats.densest_calls += 1;
        stats.rebuilds += cand.rebuilds();
    }
}

/// Greedy coverage DP: the sparsified DP where candidate `[a, i]` scores
/// `gain([a, i], C)` with `C` the node sets on the path of `s[a−1, ℓ−1]`.
/// No approximation guarantee.
pub fn kgcvr_segment(
    g: &TemporalGraph,
    k: usize,
    eps_dp: f64,
    eps_ds: f64,
    config: &CoverConfig,
) -> Result<(Segmentation, CoverReport)> {
    check_k(g, k)?;
    check_eps("eps_dp", eps_dp)?;
    check_eps("eps_ds", eps_ds)?;
    if !(config.lambda >= 0.0 && config.lambda.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "lambda must be >= 0, got {}",
            config.lambda
        )));
    }
    let mut stats = DpStats::default();
    let mut source = CoverSource {
        g,
        eps: eps_ds,
        base: config.fresh_state(),
    };
    let (rows, _) = run_skeleton(g, k, eps_dp, &mut source, &mut stats);
    let cell = &rows[k][g.r()];
    let steps = cell.path.as_ref().map(Step::chain).unwrap_or_default();

    let mut state = config.fresh_state();
    let mut episodes = Vec::with_capacity(k);
    for (iv, nodes) in cover_timeline(&steps, g.r(), k) {
        let nodes = match nodes {
            Some(n) => n,
            None => gain_interval(g, iv, &state, eps_ds).1,
        };
        let density = g.induced_static(iv).density_of(&nodes);
        let score = density + config.lambda * nodes.iter().map(|&v| state.marginal(v)).sum::<f64>();
        state.add(&nodes);
        episodes.push(Episode {
            interval: iv,
            nodes,
            density,
            score,
        });
    }
    let report = CoverReport::from_episodes(&episodes, config);
    let seg = Segmentation {
        total_profit: episodes.iter().map(|e| e.density).sum(),
        episodes,
        dp_value: cell.value,
        params: SegmentParams {
            k,
            mode: Mode::KgCvr,
            eps_dp: Some(eps_dp),
            eps_ds: Some(eps_ds),
            post_processed: false,
        },
        stats,
    };
    Ok((seg, report))
}
