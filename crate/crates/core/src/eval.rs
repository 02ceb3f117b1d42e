//! Scoring discovered episodes against planted communities.
//!
//! Each planted community is matched to the episode whose raw time range
//! overlaps its interval the most (earliest episode on ties). Node-set
//! precision, recall and F are averaged over communities; a community with
//! no overlapping episode scores zero.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::coverage::{jaccard, mean_pairwise_jaccard};
use crate::segmentation::Segmentation;
use crate::synth::GroundTruth;
use crate::temporal_graph::TemporalGraph;

pub const MATCHING_RULE: &str = "max raw-interval overlap, earliest episode on ties";

/// A discovered episode in raw labels and raw timestamps (inclusive).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoundEpisode {
    pub start: i64,
    pub end: i64,
    pub nodes: Vec<i64>,
}

/// Translate a segmentation to raw labels and timestamps.
pub fn found_episodes(g: &TemporalGraph, seg: &Segmentation) -> Vec<FoundEpisode> {
    seg.episodes
        .iter()
        .map(|e| {
            let mut nodes: Vec<i64> = e.nodes.iter().map(|&v| g.label(v)).collect();
            nodes.sort_unstable();
            FoundEpisode {
                start: g.raw_time(e.interval.lo),
                end: g.raw_time(e.interval.hi),
                nodes,
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommunityMatch {
    pub community: usize,
    /// Matched episode, `None` when no episode overlaps.
    pub episode: Option<usize>,
    pub overlap: i64,
    pub precision: f64,
    pub recall: f64,
    pub f: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub matching_rule: String,
    pub matches: Vec<CommunityMatch>,
    pub mean_precision: f64,
    pub mean_recall: f64,
    pub mean_f: f64,
    /// Pairwise Jaccard similarity of the found node sets.
    pub jaccard_matrix: Vec<Vec<f64>>,
    pub mean_jaccard: f64,
    /// Distinct nodes covered by the found episodes.
    pub cover: usize,
}

fn overlap(a: (i64, i64), b: (i64, i64)) -> i64 {
    (a.1.min(b.1) - a.0.max(b.0) + 1).max(0)
}

fn prf(found: &[i64], truth: &[i64]) -> (f64, f64, f64) {
    let f: BTreeSet<i64> = found.iter().copied().collect();
    let t: BTreeSet<i64> = truth.iter().copied().collect();
    let common = f.intersection(&t).count() as f64;
    let p = if f.is_empty() {
        0.0
    } else {
        common / f.len() as f64
    };
    let r = if t.is_empty() {
        0.0
    } else {
        common / t.len() as f64
    };
    let fm = if p + r == 0.0 {
        0.0
    } else {
        2.0 * p * r / (p + r)
    };
    (p, r, fm)
}

pub fn evaluate(found: &[FoundEpisode], truth: &GroundTruth) -> EvalReport {
    let mut matches = Vec::with_capacity(truth.communities.len());
    for (ci, c) in truth.communities.iter().enumerate() {
        let mut best: Option<(usize, i64)> = None;
        for (ei, e) in found.iter().enumerate() {
            let ov = overlap((c.start, c.end), (e.start, e.end));
            if ov > 0 && best.is_none_or(|(_, b)| ov > b) {
                best = Some((ei, ov));
            }
        }
        let m = match best {
            Some((ei, ov)) => {
                let (precision, recall, f) = prf(&found[ei].nodes, &c.nodes);
                CommunityMatch {
                    community: ci,
                    episode: Some(ei),
                    overlap: ov,
                    precision,
                    recall,
                    f,
                }
            }
            None => CommunityMatch {
                community: ci,
                episode: None,
                overlap: 0,
                precision: 0.0,
                recall: 0.0,
                f: 0.0,
            },
        };
        matches.push(m);
    }
    let denom = matches.len().max(1) as f64;
    let mean = |get: fn(&CommunityMatch) -> f64| matches.iter().map(get).sum::<f64>() / denom;
    let sets: Vec<Vec<i64>> = found.iter().map(|e| e.nodes.clone()).collect();
    let jaccard_matrix = sets
        .iter()
        .map(|a| sets.iter().map(|b| jaccard(a, b)).collect())
        .collect();
    let cover = sets.iter().flatten().collect::<BTreeSet<_>>().len();
    EvalReport {
        matching_rule: MATCHING_RULE.to_string(),
        mean_precision: mean(|m| m.precision),
        mean_recall: mean(|m| m.recall),
        mean_f: mean(|m| m.f),
        matches,
        jaccard_matrix,
        mean_jaccard: mean_pairwise_jaccard(&sets),
        cover,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::PlantedCommunity;

    fn truth() -> GroundTruth {
        GroundTruth {
            communities: vec![
                PlantedCommunity {
                    nodes: vec![1, 2, 3],
                    start: 10,
                    end: 20,
                },
                PlantedCommunity {
                    nodes: vec![7, 8],
                    start: 50,
                    end: 60,
                },
            ],
        }
    }

    fn as_found(t: &GroundTruth) -> Vec<FoundEpisode> {
        t.communities
            .iter()
            .map(|c| FoundEpisode {
                start: c.start,
                end: c.end,
                nodes: c.nodes.clone(),
            })
            .collect()
    }

    #[test]
    fn perfect_match() {
        let r = evaluate(&as_found(&truth()), &truth());
        assert_eq!((r.mean_precision, r.mean_recall, r.mean_f), (1.0, 1.0, 1.0));
        assert_eq!(r.cover, 5);
        assert_eq!(r.jaccard_matrix[0][0], 1.0);
    }

    #[test]
    fn supersets_lose_precision_only() {
        let mut found = as_found(&truth());
        found[0].nodes.push(99);
        found[1].nodes.push(98);
        let r = evaluate(&found, &truth());
        assert_eq!(r.mean_recall, 1.0);
        assert!(r.mean_precision < 1.0);
    }

    #[test]
    fn no_overlap_scores_zero() {
        let found = vec![FoundEpisode {
            start: 100,
            end: 200,
            nodes: vec![1, 2, 3, 7, 8],
        }];
        let r = evaluate(&found, &truth());
        assert_eq!(r.mean_f, 0.0);
        assert!(r.matches.iter().all(|m| m.episode.is_none()));
    }

    #[test]
    fn ties_go_to_earliest_episode() {
        let found = vec![
            FoundEpisode {
                start: 5,
                end: 15,
                nodes: vec![1],
            },
            FoundEpisode {
                start: 16,
                end: 30,
                nodes: vec![1, 2, 3],
            },
        ];
        let r = evaluate(&found, &truth());
        // overlaps 6 and 5
        assert_eq!(r.matches[0].episode, Some(0));
        let tie = vec![
            FoundEpisode {
                start: 10,
                end: 14,
                nodes: vec![1],
            },
            FoundEpisode {
                start: 16,
                end: 20,
                nodes: vec![2],
            },
        ];
        assert_eq!(evaluate(&tie, &truth()).matches[0].episode, Some(0));
    }
}
