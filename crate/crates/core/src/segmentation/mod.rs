//! Timeline segmentation into `k` densest episodes.
//!
//! * [`exact_dp_segment`]: the textbook `O(k r²)` recurrence, with either
//!   exact densest subgraphs (`Optimal`) or incremental suffix estimates
//!   (`kGoptDP`).
//! * [`approx_dp_segment`]: the candidate-sparsified DP, with exact densest
//!   subgraphs (`kGoptDS`) or one incremental structure per candidate
//!   (`kGapprox`).
//! * [`brute_force_segment`]: exhaustive oracle for tiny inputs.

mod approx;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::incremental::IncrementalDensest;
use crate::static_densest::{brute_force_densest, exact_densest, DensestResult};
use crate::temporal_graph::{Interval, NodeId, TemporalGraph};

pub use approx::{approx_dp_detailed, approx_dp_segment, candidate_cap, sprs};
pub(crate) use approx::{cover_timeline, run_skeleton, CandidateSource, Step};

/// Solver pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Exact DP with exact densest subgraphs.
    Optimal,
    /// Sparsified DP with incremental densest subgraphs.
    KgApprox,
    /// Exact DP with incremental densest subgraphs.
    KgOptDp,
    /// Sparsified DP with exact densest subgraphs.
    KgOptDs,
    /// Sparsified DP maximizing density plus coverage gain.
    KgCvr,
}

impl Mode {
    pub const ALL: [Mode; 5] = [
        Mode::Optimal,
        Mode::KgApprox,
        Mode::KgOptDp,
        Mode::KgOptDs,
        Mode::KgCvr,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Mode::Optimal => "optimal",
            Mode::KgApprox => "kgapprox",
            Mode::KgOptDp => "kgoptdp",
            Mode::KgOptDs => "kgoptds",
            Mode::KgCvr => "kgcvr",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Mode::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidParameter(format!("unknown mode '{s}'")))
    }
}

/// How `d*` of an interval is computed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DensestMode {
    Exact,
    /// Incremental level-set structure with accuracy `ε_ds`.
    Incremental(f64),
}

/// One output interval with its subgraph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Episode {
    pub interval: Interval,
    /// Sorted node ids.
    pub nodes: Vec<NodeId>,
    /// `d(H)` on the interval's induced graph.
    pub density: f64,
    /// Objective contribution; equals `density` except under coverage gain.
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentParams {
    pub k: usize,
    pub mode: Mode,
    pub eps_dp: Option<f64>,
    pub eps_ds: Option<f64>,
    pub post_processed: bool,
}

/// Counters collected while a DP runs.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DpStats {
    /// Densest-subgraph evaluations (exact solves or incremental instances).
    pub densest_calls: usize,
    pub edge_insertions: usize,
    pub rebuilds: usize,
    pub sprs_calls: usize,
    /// Largest candidate list right after a sparsification.
    pub max_candidates: usize,
    /// `2 + ⌈k(1+ε)/ε⌉`, when candidates are sparsified.
    pub candidate_cap: Option<usize>,
    pub cap_violations: usize,
}

/// `k` disjoint episodes covering `[1, r]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Segmentation {
    pub episodes: Vec<Episode>,
    /// Sum of episode densities.
    pub total_profit: f64,
    /// Value of the final DP cell.
    pub dp_value: f64,
    pub params: SegmentParams,
    pub stats: DpStats,
}

impl Segmentation {
    pub fn intervals(&self) -> Vec<Interval> {
        self.episodes.iter().map(|e| e.interval).collect()
    }

    /// Interval ends except the last: the segment boundaries.
    pub fn boundaries(&self) -> Vec<usize> {
        let n = self.episodes.len();
        self.episodes
            .iter()
            .take(n.saturating_sub(1))
            .map(|e| e.interval.hi)
            .collect()
    }

    /// Check ordering, coverage of `[1, r]`, densities and the profit sum.
    pub fn validate(&self, g: &TemporalGraph) -> Result<()> {
        let mut next = 1;
        for e in &self.episodes {
            if e.interval.lo != next || e.interval.hi < e.interval.lo {
                return Err(Error::Invariant(format!(
                    "episode {:?} does not continue at {next}",
                    e.interval
                )));
            }
            next = e.interval.hi + 1;
            let d = g.induced_static(e.interval).density_of(&e.nodes);
            if (d - e.density).abs() > 1e-12 {
                return Err(Error::Invariant(format!(
                    "episode {:?}: density {} but node set gives {d}",
                    e.interval, e.density
                )));
            }
        }
        if next != g.r() + 1 {
            return Err(Error::Invariant(format!(
                "episodes end at {} not {}",
                next - 1,
                g.r()
            )));
        }
        let sum: f64 = self.episodes.iter().map(|e| e.density).sum();
        if (sum - self.total_profit).abs() > 1e-9 {
            return Err(Error::Invariant(format!(
                "total {} but episodes sum to {sum}",
                self.total_profit
            )));
        }
        Ok(())
    }
}

/// `s[ℓ][i]` for `ℓ ∈ 0..=k`, `i ∈ 0..=r` (row 0 and column 0 are zero).
#[derive(Debug, Clone, PartialEq)]
pub struct ProfitTable {
    pub s: Vec<Vec<f64>>,
}

impl ProfitTable {
    pub fn value(&self, i: usize, ell: usize) -> f64 {
        self.s[ell][i]
    }

    /// Non-decreasing in `i` for each `ℓ`, and in `ℓ` for each `i`.
    pub fn check_monotone(&self) -> Result<()> {
        for (ell, row) in self.s.iter().enumerate() {
            for i in 1..row.len() {
                if row[i] < row[i - 1] {
                    return Err(Error::Invariant(format!(
                        "s[{i},{ell}] < s[{},{ell}]",
                        i - 1
                    )));
                }
                if ell > 0 && row[i] < self.s[ell - 1][i] {
                    return Err(Error::Invariant(format!(
                        "s[{i},{ell}] < s[{i},{}]",
                        ell - 1
                    )));
                }
            }
        }
        Ok(())
    }
}

pub(crate) fn check_k(g: &TemporalGraph, k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::Infeasible("k must be at least 1".into()));
    }
    if k > g.r() {
        return Err(Error::Infeasible(format!(
            "k = {k} exceeds the number of distinct timestamps ({})",
            g.r()
        )));
    }
    Ok(())
}

pub(crate) fn check_eps(name: &str, eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "{name} must be positive, got {eps}"
        )));
    }
    Ok(())
}

/// The density is recomputed on `g[iv]`: an incremental best set may have
/// gained edges after it was recorded.
fn episode_from(g: &TemporalGraph, iv: Interval, res: DensestResult) -> Episode {
    let density = g.induced_static(iv).density_of(&res.nodes);
    Episode {
        interval: iv,
        nodes: res.nodes,
        density,
        score: density,
    }
}

/// Densest subgraph of `[lo, hi]` by inserting timestamps `hi, hi-1, …, lo`
/// into a fresh incremental structure.
pub fn suffix_incremental(g: &TemporalGraph, iv: Interval, eps: f64) -> DensestResult {
    let mut inc = IncrementalDensest::new(eps, None);
    for t in (iv.lo..=iv.hi).rev() {
        for e in g.edges_at(t) {
            inc.insert(e.u, e.v);
        }
    }
    inc.best().to_result()
}

/// Densest subgraph of `[lo, hi]` by inserting timestamps in order.
pub fn forward_incremental(g: &TemporalGraph, iv: Interval, eps: f64) -> DensestResult {
    let mut inc = IncrementalDensest::new(eps, None);
    for e in g.edges_in(iv) {
        inc.insert(e.u, e.v);
    }
    inc.best().to_result()
}

/// Standard DP over all split points with exactly `k` non-empty intervals.
/// Ties go to the smallest start of the last interval.
pub fn exact_dp_segment(g: &TemporalGraph, k: usize, densest: DensestMode) -> Result<Segmentation> {
    check_k(g, k)?;
    let r = g.r();
    let mut stats = DpStats::default();
    // d[j][i] for 1 <= j <= i <= r
    let mut d = vec![vec![0.0f64; r + 1]; r + 2];
    match densest {
        DensestMode::Exact => {
            for j in 1..=r {
                for i in j..=r {
                    d[j][i] = exact_densest(&g.induced_static(Interval::new(j, i))).density;
                    stats.densest_calls += 1;
                }
            }
        }
        DensestMode::Incremental(eps) => {
            check_eps("eps_ds", eps)?;
            for i in 1..=r {
                let mut inc = IncrementalDensest::new(eps, None);
                stats.densest_calls += 1;
                for j in (1..=i).rev() {
                    for e in g.edges_at(j) {
                        inc.insert(e.u, e.v);
                        stats.edge_insertions += 1;
                    }
                    d[j][i] = inc.best_score();
                }
                stats.rebuilds += inc.rebuilds();
            }
        }
    }

    let neg = f64::NEG_INFINITY;
    let mut o = vec![vec![neg; r + 1]; k + 1];
    let mut back = vec![vec![0usize; r + 1]; k + 1];
    for i in 1..=r {
        o[1][i] = d[1][i];
        back[1][i] = 1;
    }
    for ell in 2..=k {
        for i in ell..=r {
            for j in (ell - 1)..i {
                let v = o[ell - 1][j] + d[j + 1][i];
                if v > o[ell][i] {
                    o[ell][i] = v;
                    back[ell][i] = j + 1;
                }
            }
        }
    }

    let mut intervals = Vec::with_capacity(k);
    let mut i = r;
    for ell in (1..=k).rev() {
        let a = back[ell][i];
        intervals.push(Interval::new(a, i));
        i = a - 1;
    }
    intervals.reverse();

    let episodes: Vec<Episode> = intervals
        .into_iter()
        .map(|iv| match densest {
            DensestMode::Exact => episode_from(g, iv, exact_densest(&g.induced_static(iv))),
            DensestMode::Incremental(eps) => episode_from(g, iv, suffix_incremental(g, iv, eps)),
        })
        .collect();
    let total_profit = episodes.iter().map(|e| e.density).sum();
    let (mode, eps_ds) = match densest {
        DensestMode::Exact => (Mode::Optimal, None),
        DensestMode::Incremental(eps) => (Mode::KgOptDp, Some(eps)),
    };
    Ok(Segmentation {
        episodes,
        total_profit,
        dp_value: o[k][r],
        params: SegmentParams {
            k,
            mode,
            eps_dp: None,
            eps_ds,
            post_processed: false,
        },
        stats,
    })
}

/// Size limits of [`brute_force_segment`].
pub const BRUTE_FORCE_MAX_R: usize = 20;
pub const BRUTE_FORCE_MAX_K: usize = 5;
pub const BRUTE_FORCE_MAX_N: usize = 12;

/// Exhaustive search over all `C(r−1, k−1)` boundary placements with
/// exhaustive densest subgraphs per part. Ties go to the lexicographically
/// earliest boundary vector.
pub fn brute_force_segment(g: &TemporalGraph, k: usize) -> Result<Segmentation> {
    check_k(g, k)?;
    for (what, limit, actual) in [
        (
            "brute-force segmentation timestamps",
            BRUTE_FORCE_MAX_R,
            g.r(),
        ),
        ("brute-force segmentation k", BRUTE_FORCE_MAX_K, k),
        ("brute-force segmentation nodes", BRUTE_FORCE_MAX_N, g.n()),
    ] {
        if actual > limit {
            return Err(Error::TooLarge {
                what,
                limit,
                actual,
            });
        }
    }
    let r = g.r();
    let mut memo: HashMap<(usize, usize), DensestResult> = HashMap::new();
    let mut eval = |lo: usize, hi: usize| -> Result<f64> {
        if let Some(res) = memo.get(&(lo, hi)) {
            return Ok(res.density);
        }
        let res = brute_force_densest(&g.induced_static(Interval::new(lo, hi)))?;
        let d = res.density;
        memo.insert((lo, hi), res);
        Ok(d)
    };

    // bounds[i] = end of interval i; the last end is always r
    let mut ends: Vec<usize> = (1..k).collect();
    let mut best: Option<(f64, Vec<usize>)> = None;
    loop {
        let mut total = 0.0;
        let mut lo = 1;
        for &hi in ends.iter().chain(std::iter::once(&r)) {
            total += eval(lo, hi)?;
            lo = hi + 1;
        }
        if best.as_ref().is_none_or(|(b, _)| total > *b) {
            best = Some((total, ends.clone()));
        }
        // next combination in lexicographic order
        let m = ends.len();
        let mut idx = m;
        while idx > 0 && ends[idx - 1] == r - 1 - (m - idx) {
            idx -= 1;
        }
        if idx == 0 {
            break;
        }
        ends[idx - 1] += 1;
        for x in idx..m {
            ends[x] = ends[x - 1] + 1;
        }
    }
    let (total, ends) = best.expect("at least one placement");
    let mut episodes = Vec::with_capacity(k);
    let mut lo = 1;
    for &hi in ends.iter().chain(std::iter::once(&r)) {
        let res = memo[&(lo, hi)].clone();
        episodes.push(episode_from(g, Interval::new(lo, hi), res));
        lo = hi + 1;
    }
    Ok(Segmentation {
        total_profit: episodes.iter().map(|e| e.density).sum(),
        episodes,
        dp_value: total,
        params: SegmentParams {
            k,
            mode: Mode::Optimal,
            eps_dp: None,
            eps_ds: None,
            post_processed: false,
        },
        stats: DpStats::default(),
    })
}

/// Replace every episode's subgraph by the exact densest subgraph of its
/// interval and recompute the total.
pub fn post_process(g: &TemporalGraph, seg: &Segmentation) -> Segmentation {
    let mut out = seg.clone();
    for e in &mut out.episodes {
        let res = exact_densest(&g.induced_static(e.interval));
        e.nodes = res.nodes;
        e.density = res.density;
        e.score = res.density;
    }
    out.total_profit = out.episodes.iter().map(|e| e.density).sum();
    out.params.post_processed = true;
    out
}
