//! Approximate DP with a sparsified candidate list.

use std::collections::HashMap;
use std::rc::Rc;

use super::{
    check_eps, check_k, DensestMode, DpStats, Episode, Mode, ProfitTable, SegmentParams,
    Segmentation,
};
use crate::error::Result;
use crate::incremental::IncrementalDensest;
use crate::static_densest::{exact_densest, DensestResult};
use crate::temporal_graph::{Interval, NodeId, TemporalGraph};

/// One concrete interval choice on a DP path.
#[derive(Debug)]
pub(crate) struct Step {
    pub start: usize,
    pub nodes: Vec<NodeId>,
    pub parent: Option<Rc<Step>>,
}

impl Step {
    /// Steps from the first interval to this one.
    pub fn chain(self: &Rc<Self>) -> Vec<Rc<Step>> {
        let mut out = Vec::new();
        let mut cur = Some(Rc::clone(self));
        while let Some(s) = cur {
            cur = s.parent.clone();
            out.push(s);
        }
        out.reverse();
        out
    }
}

#[derive(Debug, Clone, Default)]
pub(crate) struct Cell {
    pub value: f64,
    pub path: Option<Rc<Step>>,
}

/// Supplies `d*([a, i])`, or a substitute gain, for growing intervals.
pub(crate) trait CandidateSource {
    type Cand;
    /// Start a candidate interval at `a`; `prefix` is the path of `s[a−1, ℓ−1]`.
    fn open(&mut self, a: usize, prefix: Option<&Rc<Step>>) -> Self::Cand;
    /// Extend the candidate's interval to end at `t`.
    fn extend(&mut self, cand: &mut Self::Cand, t: usize, stats: &mut DpStats);
    fn score(&mut self, cand: &Self::Cand, stats: &mut DpStats) -> f64;
    /// Node set of the current best subgraph.
    fn nodes(&mut self, cand: &Self::Cand) -> Vec<NodeId>;
    /// Called when a candidate is dropped.
    fn close(&mut self, _cand: Self::Cand, _stats: &mut DpStats) {}
}

struct Entry<C> {
    a: usize,
    prev: Cell,
    cand: C,
}

/// `2 + ⌈k(1+ε)/ε⌉`.
pub fn candidate_cap(k: usize, eps: f64) -> usize {
    2 + (k as f64 * (1.0 + eps) / eps).ceil() as usize
}

/// Sparsify a candidate list. `prev(x)` is the cached `s[a−1, ℓ−1]` of a
/// candidate. With `δ = σε/(k + ℓε)`, the middle of three consecutive
/// candidates is removed while the outer two differ by at most `δ`. The
/// first and last candidates always survive.
pub fn sprs<T>(
    cands: &mut Vec<T>,
    prev: impl Fn(&T) -> f64,
    sigma: f64,
    ell: usize,
    eps: f64,
    k: usize,
) {
    let delta = sigma * eps / (k as f64 + ell as f64 * eps);
    let mut j = 0;
    while j + 2 < cands.len() {
        if prev(&cands[j + 2]) - prev(&cands[j]) <= delta {
            cands.remove(j + 1);
        } else {
            j += 1;
        }
    }
}

/// Fill the profit table row by row. Row 1 is a single growing candidate
/// started at 1; rows `ℓ ≥ 2` keep a sparsified candidate list.
pub(crate) fn run_skeleton<S: CandidateSource>(
    g: &TemporalGraph,
    k: usize,
    eps: f64,
    source: &mut S,
    stats: &mut DpStats,
) -> (Vec<Vec<Cell>>, ProfitTable) {
    let r = g.r();
    let cap = candidate_cap(k, eps);
    stats.candidate_cap = Some(cap);
    let mut rows: Vec<Vec<Cell>> = vec![vec![Cell::default(); r + 1]];

    let mut first = vec![Cell::default(); r + 1];
    let mut cand = source.open(1, None);
    for i in 1..=r {
        source.extend(&mut cand, i, stats);
        let value = source.score(&cand, stats);
        first[i] = Cell {
            value,
            path: Some(Rc::new(Step {
                start: 1,
                nodes: source.nodes(&cand),
                parent: None,
            })),
        };
    }
    source.close(cand, stats);
    rows.push(first);

    for ell in 2..=k {
        let below = &rows[ell - 1];
        let mut row = vec![Cell::default(); r + 1];
        let mut list: Vec<Entry<S::Cand>> = Vec::new();
        for i in 1..=r {
            let prev = below[i - 1].clone();
            let cand = source.open(i, prev.path.as_ref());
            list.push(Entry { a: i, prev, cand });

            let mut best: Option<(usize, f64)> = None;
            for (idx, e) in list.iter_mut().enumerate() {
                source.extend(&mut e.cand, i, stats);
                let v = e.prev.value + source.score(&e.cand, stats);
                if best.is_none_or(|(_, b)| v > b) {
                    best = Some((idx, v));
                }
            }
            let (idx, cand_value) = best.expect("list is never empty");
            let carry_row = &row[i - 1];
            let carry_below = &below[i];
            let cell = if cand_value >= carry_row.value && cand_value >= carry_below.value {
                let e = &list[idx];
                Cell {
                    value: cand_value,
                    path: Some(Rc::new(Step {
                        start: e.a,
                        nodes: source.nodes(&e.cand),
                        parent: e.prev.path.clone(),
                    })),
                }
            } else if carry_row.value >= carry_below.value {
                carry_row.clone()
            } else {
                carry_below.clone()
            };
            let sigma = cell.value;
            row[i] = cell;

            let before: Vec<usize> = list.iter().map(|e| e.a).collect();
            sprs(&mut list, |e| e.prev.value, sigma, ell, eps, k);
            stats.sprs_calls += 1;
            if list.len() < before.len() {
                // hand evicted instances back to the source
                let kept: Vec<usize> = list.iter().map(|e| e.a).collect();
                let mut rebuilt = Vec::with_capacity(kept.len());
                let mut dropped = Vec::new();
                for e in std::mem::take(&mut list) {
                    if kept.binary_search(&e.a).is_ok() {
                        rebuilt.push(e);
                    } else {
                        dropped.push(e);
                    }
                }
                list = rebuilt;
                for e in dropped {
                    source.close(e.cand, stats);
                }
            }
            stats.max_candidates = stats.max_candidates.max(list.len());
            if list.len() > cap {
                stats.cap_violations += 1;
            }
        }
        for e in list {
            source.close(e.cand, stats);
        }
        rows.push(row);
    }

    let table = ProfitTable {
        s: rows
            .iter()
            .map(|row| row.iter().map(|c| c.value).collect())
            .collect(),
    };
    (rows, table)
}

/// Pad the chosen intervals to cover `[1, r]`: the first starts at 1 and each
/// interval's end is stretched to the next start − 1. With fewer than `k`
/// intervals, the last timestamp of the longest interval is split off
/// (earliest on ties) until there are `k`; split parts carry no node set.
pub(crate) fn cover_timeline(
    steps: &[Rc<Step>],
    r: usize,
    k: usize,
) -> Vec<(Interval, Option<Vec<NodeId>>)> {
    let mut parts: Vec<(Interval, Option<Vec<NodeId>>)> = Vec::with_capacity(k);
    for (idx, s) in steps.iter().enumerate() {
        let lo = if idx == 0 { 1 } else { s.start };
        let hi = steps.get(idx + 1).map_or(r, |n| n.start - 1);
        parts.push((Interval::new(lo, hi), Some(s.nodes.clone())));
    }
    if parts.is_empty() {
        parts.push((Interval::new(1, r), None));
    }
    while parts.len() < k {
        let (pos, _) = parts
            .iter()
            .enumerate()
            .fold((0, 0), |(bp, bl), (p, (iv, _))| {
                if iv.len() > bl {
                    (p, iv.len())
                } else {
                    (bp, bl)
                }
            });
        let iv = parts[pos].0;
        debug_assert!(iv.len() >= 2, "k <= r guarantees a splittable interval");
        parts[pos] = (Interval::new(iv.lo, iv.hi - 1), None);
        parts.insert(pos + 1, (Interval::new(iv.hi, iv.hi), None));
    }
    parts
}

struct IncrementalSource<'g> {
    g: &'g TemporalGraph,
    eps: f64,
}

impl CandidateSource for IncrementalSource<'_> {
    type Cand = IncrementalDensest;

    fn open(&mut self, _a: usize, _prefix: Option<&Rc<Step>>) -> IncrementalDensest {
        IncrementalDensest::new(self.eps, None)
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

/// Exact `d*` per interval, memoized.
struct ExactSource<'g> {
    g: &'g TemporalGraph,
    memo: HashMap<(usize, usize), DensestResult>,
}

impl ExactSource<'_> {
    fn get(&mut self, iv: (usize, usize), stats: Option<&mut DpStats>) -> &DensestResult {
        let g = self.g;
        self.memo.entry(iv).or_insert_with(|| {
            if let Some(s) = stats {
                s.densest_calls += 1;
            }
            exact_densest(&g.induced_static(Interval::new(iv.0, iv.1)))
        })
    }
}

impl CandidateSource for ExactSource<'_> {
    type Cand = (usize, usize);

    fn open(&mut self, a: usize, _prefix: Option<&Rc<Step>>) -> (usize, usize) {
        (a, a)
    }

    fn extend(&mut self, cand: &mut (usize, usize), t: usize, _stats: &mut DpStats) {
        cand.1 = t;
    }

    fn score(&mut self, cand: &(usize, usize), stats: &mut DpStats) -> f64 {
        self.get(*cand, Some(stats)).density
    }

    fn nodes(&mut self, cand: &(usize, usize)) -> Vec<NodeId> {
        self.get(*cand, None).nodes.clone()
    }
}

/// Sparsified DP. Returns the segmentation and the filled profit table.
pub fn approx_dp_detailed(
    g: &TemporalGraph,
    k: usize,
    eps_dp: f64,
    densest: DensestMode,
) -> Result<(Segmentation, ProfitTable)> {
    check_k(g, k)?;
    check_eps("eps_dp", eps_dp)?;
    let mut stats = DpStats::default();
    let (rows, table, mode, eps_ds) = match densest {
        DensestMode::Exact => {
            let mut src = ExactSource {
                g,
                memo: HashMap::new(),
            };
            let (rows, table) = run_skeleton(g, k, eps_dp, &mut src, &mut stats);
            (rows, table, Mode::KgOptDs, None)
        }
        DensestMode::Incremental(eps) => {
            check_eps("eps_ds", eps)?;
            let mut src = IncrementalSource { g, eps };
            let (rows, table) = run_skeleton(g, k, eps_dp, &mut src, &mut stats);
            (rows, table, Mode::KgApprox, Some(eps))
        }
    };
    let cell = &rows[k][g.r()];
    let steps = cell.path.as_ref().map(Step::chain).unwrap_or_default();
    let parts = cover_timeline(&steps, g.r(), k);

    let episodes: Vec<Episode> = parts
        .into_iter()
        .map(|(iv, nodes)| {
            let h = g.induced_static(iv);
            let nodes = match nodes {
                Some(n) => n,
                None => match densest {
                    DensestMode::Exact => exact_densest(&h).nodes,
                    DensestMode::Incremental(eps) => super::forward_incremental(g, iv, eps).nodes,
                },
            };
            let density = h.density_of(&nodes);
            Episode {
                interval: iv,
                nodes,
                density,
                score: density,
            }
        })
        .collect();
    let seg = Segmentation {
        total_profit: episodes.iter().map(|e| e.density).sum(),
        episodes,
        dp_value: cell.value,
        params: SegmentParams {
            k,
            mode,
            eps_dp: Some(eps_dp),
            eps_ds,
            post_processed: false,
        },
        stats,
    };
    Ok((seg, table))
}

/// Sparsified DP: `kGoptDS` with [`DensestMode::Exact`], `kGapprox` with
/// [`DensestMode::Incremental`].
pub fn approx_dp_segment(
    g: &TemporalGraph,
    k: usize,
    eps_dp: f64,
    densest: DensestMode,
) -> Result<Segmentation> {
    approx_dp_detailed(g, k, eps_dp, densest).map(|(s, _)| s)
}
