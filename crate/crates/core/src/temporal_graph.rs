//! Temporal graph model: timestamped undirected edges over dense node ids, a
//! compressed timestamp axis, and the static graphs induced by time intervals.
//!
//! Timestamp indices run over `1..=r`, one per distinct raw timestamp, so every
//! index carries at least one edge. Raw timestamps are kept only for reporting.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt::Write as _;
use std::io::Read;

use crate::error::{Error, Result};

/// Dense internal node index.
pub type NodeId = u32;

/// A timestamped undirected interaction between two distinct nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TemporalEdge {
    pub u: NodeId,
    pub v: NodeId,
    /// Compressed timestamp index, `1..=r`.
    pub t: usize,
}

/// Closed interval of timestamp indices. `hi < lo` is the empty interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct Interval {
    pub lo: usize,
    pub hi: usize,
}

impl Interval {
    pub fn new(lo: usize, hi: usize) -> Self {
        Self { lo, hi }
    }

    pub fn empty() -> Self {
        Self { lo: 1, hi: 0 }
    }

    pub fn is_empty(&self) -> bool {
        self.hi < self.lo
    }

    pub fn len(&self) -> usize {
        if self.is_empty() {
            0
        } else {
            self.hi - self.lo + 1
        }
    }

    pub fn contains(&self, t: usize) -> bool {
        self.lo <= t && t <= self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        other.is_empty() || (self.lo <= other.lo && other.hi <= self.hi)
    }
}

/// Immutable temporal graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TemporalGraph {
    labels: Vec<i64>,
    edges: Vec<TemporalEdge>,
    /// `raw_times[t - 1]` is the original timestamp of index `t`.
    raw_times: Vec<i64>,
    /// Edges of index `t` are `edges[bounds[t - 1]..bounds[t]]`.
    bounds: Vec<usize>,
}

impl TemporalGraph {
    /// Builds a graph from labelled `(u, v, t)` triples. Labels are remapped to
    /// `0..n` in ascending label order, timestamps to `1..=r` in ascending order.
    /// The `usize` in each item is the 1-based source line used in errors.
    pub fn from_labeled<I>(triples: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, i64, i64, i64)>,
    {
        let raw: Vec<(usize, i64, i64, i64)> = triples.into_iter().collect();
        if raw.is_empty() {
            return Err(Error::EmptyInput);
        }
        for &(line, u, v, _) in &raw {
            if u == v {
                return Err(Error::SelfLoop { line, node: u });
            }
        }

        let labels: Vec<i64> = raw
            .iter()
            .flat_map(|&(_, u, v, _)| [u, v])
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        if labels.len() > u32::MAX as usize {
            return Err(Error::TooLarge {
                what: "node count",
                limit: u32::MAX as usize,
                actual: labels.len(),
            });
        }
        let raw_times: Vec<i64> = raw
            .iter()
            .map(|&(_, _, _, t)| t)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let node_of: BTreeMap<i64, NodeId> = labels
            .iter()
            .enumerate()
            .map(|(i, &l)| (l, i as NodeId))
            .collect();
        let index_of: BTreeMap<i64, usize> = raw_times
            .iter()
            .enumerate()
            .map(|(i, &t)| (t, i + 1))
            .collect();

        let mut edges: Vec<TemporalEdge> = raw
            .iter()
            .map(|&(_, u, v, t)| TemporalEdge {
                u: node_of[&u],
                v: node_of[&v],
                t: index_of[&t],
            })
            .collect();
        // stable: input order kept within a timestamp
        edges.sort_by_key(|e| e.t);

        let r = raw_times.len();
        let mut bounds = vec![0usize; r + 1];
        for e in &edges {
            bounds[e.t] += 1;
        }
        for t in 1..=r {
            bounds[t] += bounds[t - 1];
        }

        Ok(Self {
            labels,
            edges,
            raw_times,
            bounds,
        })
    }

    /// Parses the `u v t` edge-list format. Tokens may be separated by
    /// whitespace or commas; lines starting with `#` and blank lines are skipped.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut triples = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let tokens: Vec<&str> = trimmed
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|s| !s.is_empty())
                .collect();
            if tokens.len() != 3 {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("expected 3 fields `u v t`, found {}", tokens.len()),
                });
            }
            let mut vals = [0i64; 3];
            for (slot, tok) in vals.iter_mut().zip(&tokens) {
                *slot = tok.parse::<i64>().map_err(|_| Error::Parse {
                    line: line_no,
                    message: format!("`{tok}` is not an integer"),
                })?;
            }
            triples.push((line_no, vals[0], vals[1], vals[2]));
        }
        Self::from_labeled(triples)
    }

    pub fn read_edge_list<R: Read>(mut reader: R) -> Result<Self> {
        let mut text = String::new();
        reader.read_to_string(&mut text)?;
        Self::parse_edge_list(&text)
    }

    /// Serializes back to the edge-list format with original labels and times.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::with_capacity(self.edges.len() * 16);
        for e in &self.edges {
            let _ = writeln!(
                out,
                "{} {} {}",
                self.labels[e.u as usize],
                self.labels[e.v as usize],
                self.raw_times[e.t - 1]
            );
        }
        out
    }

    /// Number of nodes.
    pub fn n(&self) -> usize {
        self.labels.len()
    }

    /// Number of temporal edges, duplicates included.
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Number of distinct timestamps.
    pub fn r(&self) -> usize {
        self.raw_times.len()
    }

    pub fn edges(&self) -> &[TemporalEdge] {
        &self.edges
    }

    /// Edges carrying timestamp index `t` (`1..=r`).
    pub fn edges_at(&self, t: usize) -> &[TemporalEdge] {
        &self.edges[self.bounds[t - 1]..self.bounds[t]]
    }

    pub fn labels(&self) -> &[i64] {
        &self.labels
    }

    pub fn label(&self, v: NodeId) -> i64 {
        self.labels[v as usize]
    }

    /// Original timestamp of index `t`.
    pub fn raw_time(&self, t: usize) -> i64 {
        self.raw_times[t - 1]
    }

    pub fn raw_times(&self) -> &[i64] {
        &self.raw_times
    }

    pub fn full_interval(&self) -> Interval {
        Interval::new(1, self.r())
    }

    fn clamp(&self, iv: Interval) -> Option<(usize, usize)> {
        if iv.is_empty() {
            return None;
        }
        let lo = iv.lo.max(1);
        let hi = iv.hi.min(self.r());
        (lo <= hi).then_some((lo, hi))
    }

    /// Temporal edges whose timestamp lies in `iv`.
    pub fn edges_in(&self, iv: Interval) -> &[TemporalEdge] {
        match self.clamp(iv) {
            Some((lo, hi)) => &self.edges[self.bounds[lo - 1]..self.bounds[hi]],
            None => &[],
        }
    }

    /// Static graph with the deduplicated pairs occurring inside `iv`.
    pub fn induced_static(&self, iv: Interval) -> StaticGraph {
        StaticGraph::from_pairs(self.edges_in(iv).iter().map(|e| (e.u, e.v)))
    }

    /// Temporal edges of `iv` in timestamp order, flagging repeated static pairs.
    pub fn edge_stream(&self, iv: Interval) -> EdgeStream<'_> {
        EdgeStream {
            inner: self.edges_in(iv).iter(),
            seen: HashSet::new(),
        }
    }
}

/// Item yielded by [`EdgeStream`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StreamEdge {
    pub u: NodeId,
    pub v: NodeId,
    pub t: usize,
    /// The static pair already occurred earlier in this stream.
    pub duplicate: bool,
}

pub struct EdgeStream<'a> {
    inner: std::slice::Iter<'a, TemporalEdge>,
    seen: HashSet<(NodeId, NodeId)>,
}

impl Iterator for EdgeStream<'_> {
    type Item = StreamEdge;

    fn next(&mut self) -> Option<StreamEdge> {
        let e = self.inner.next()?;
        let key = (e.u.min(e.v), e.u.max(e.v));
        let duplicate = !self.seen.insert(key);
        Some(StreamEdge {
            u: e.u,
            v: e.v,
            t: e.t,
            duplicate,
        })
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        self.inner.size_hint()
    }
}

/// Simple undirected graph over a subset of node ids.
///
/// Nodes are kept sorted; algorithms address them by their position
/// ("local index") in [`StaticGraph::nodes`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StaticGraph {
    nodes: Vec<NodeId>,
    adj: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
}

impl StaticGraph {
    /// Graph whose node set is exactly the endpoints of `pairs`.
    pub fn from_pairs<I>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        Self::with_nodes(std::iter::empty(), pairs)
    }

    /// Graph over `nodes` plus all endpoints of `pairs`; isolated nodes allowed.
    /// Self-loops are dropped and parallel pairs collapse.
    pub fn with_nodes<N, I>(nodes: N, pairs: I) -> Self
    where
        N: IntoIterator<Item = NodeId>,
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let pair_set: BTreeSet<(NodeId, NodeId)> = pairs
            .into_iter()
            .filter(|(u, v)| u != v)
            .map(|(u, v)| (u.min(v), u.max(v)))
            .collect();
        let mut node_set: BTreeSet<NodeId> = nodes.into_iter().collect();
        for &(u, v) in &pair_set {
            node_set.insert(u);
            node_set.insert(v);
        }
        let nodes: Vec<NodeId> = node_set.into_iter().collect();
        let local = |x: NodeId| nodes.binary_search(&x).expect("endpoint registered");
        let edges: Vec<(usize, usize)> = pair_set
            .iter()
            .map(|&(u, v)| (local(u), local(v)))
            .collect();
        let mut adj = vec![Vec::new(); nodes.len()];
        for &(a, b) in &edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Self { nodes, adj, edges }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Sorted node ids.
    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn node(&self, local: usize) -> NodeId {
        self.nodes[local]
    }

    pub fn local_index(&self, v: NodeId) -> Option<usize> {
        self.nodes.binary_search(&v).ok()
    }

    pub fn adjacency(&self) -> &[Vec<usize>] {
        &self.adj
    }

    pub fn neighbors(&self, local: usize) -> &[usize] {
        &self.adj[local]
    }

    pub fn degree(&self, local: usize) -> usize {
        self.adj[local].len()
    }

    /// Edges as local index pairs `(a, b)` with `a < b`.
    pub fn local_edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Edges as node id pairs `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.edges
            .iter()
            .map(|&(a, b)| (self.nodes[a], self.nodes[b]))
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        match (self.local_index(u), self.local_index(v)) {
            (Some(a), Some(b)) => self.adj[a].binary_search(&b).is_ok(),
            _ => false,
        }
    }

    /// Number of edges with both endpoints in `subset` (node ids; unknown ids ignored).
    pub fn edges_within(&self, subset: &[NodeId]) -> usize {
        let mut mask = vec![false; self.nodes.len()];
        for v in subset {
            if let Some(i) = self.local_index(*v) {
                mask[i] = true;
            }
        }
        self.edges
            .iter()
            .filter(|&&(a, b)| mask[a] && mask[b])
            .count()
    }

    /// `|E(S)| / |S|` for the induced subgraph on `subset`; 0 for an empty set.
    pub fn density_of(&self, subset: &[NodeId]) -> f64 {
        if subset.is_empty() {
            return 0.0;
        }
        self.edges_within(subset) as f64 / subset.len() as f64
    }

    /// Induced subgraph on `subset` (keeps isolated members).
    pub fn induced(&self, subset: &[NodeId]) -> StaticGraph {
        let keep: BTreeSet<NodeId> = subset
            .iter()
            .copied()
            .filter(|v| self.local_index(*v).is_some())
            .collect();
        StaticGraph::with_nodes(
            keep.iter().copied(),
            self.edges()
                .filter(|(u, v)| keep.contains(u) && keep.contains(v)),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(text: &str) -> TemporalGraph {
        TemporalGraph::parse_edge_list(text).unwrap()
    }

    #[test]
    fn parses_two_lines() {
        let g = graph("1 2 5\n2 3 6");
        assert_eq!((g.n(), g.m(), g.r()), (3, 2, 2));
        assert_eq!(g.raw_time(1), 5);
        assert_eq!(g.raw_time(2), 6);
        assert_eq!(g.labels(), &[1, 2, 3]);
    }

    #[test]
    fn duplicate_triples_stay_in_stream() {
        let g = graph("1 2 5\n1 2 5");
        assert_eq!(g.m(), 2);
        assert_eq!(g.induced_static(g.full_interval()).edge_count(), 1);
    }

    #[test]
    fn rejects_non_integer_token() {
        match TemporalGraph::parse_edge_list("a b 3") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 1),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_self_loop_with_line() {
        match TemporalGraph::parse_edge_list("# header\n1 2 3\n4 4 5") {
            Err(Error::SelfLoop { line, node }) => assert_eq!((line, node), (3, 4)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_empty_and_comment_only() {
        assert!(matches!(
            TemporalGraph::parse_edge_list(""),
            Err(Error::EmptyInput)
        ));
        assert!(matches!(
            TemporalGraph::parse_edge_list("# nothing\n\n"),
            Err(Error::EmptyInput)
        ));
    }

    #[test]
    fn comma_separated_and_wide_ids() {
        let g = graph("9000000000,-3,100\n-3, 7 ,50");
        assert_eq!(g.n(), 3);
        assert_eq!(g.raw_times(), &[50, 100]);
        assert_eq!(g.edges_at(1)[0], TemporalEdge { u: 0, v: 1, t: 1 });
    }

    #[test]
    fn wrong_field_count() {
        assert!(matches!(
            TemporalGraph::parse_edge_list("1 2 3\n1 2"),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    fn three_edge() -> TemporalGraph {
        // labels 0,1,2 map to ids 0,1,2; times 1,2 map to indices 1,2
        graph("0 1 1\n1 2 2\n0 1 2")
    }

    #[test]
    fn induced_dedups_pairs() {
        let g = three_edge();
        let h = g.induced_static(Interval::new(1, 2));
        assert_eq!(h.node_count(), 3);
        assert_eq!(h.edge_count(), 2);
    }

    #[test]
    fn induced_single_timestamp() {
        let g = three_edge();
        let h = g.induced_static(Interval::new(2, 2));
        assert_eq!(h.nodes(), &[0, 1, 2]);
        assert_eq!(h.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn induced_empty_interval() {
        let g = three_edge();
        assert!(g.induced_static(Interval::new(2, 1)).is_empty());
    }

    #[test]
    fn stream_full_and_empty() {
        let g = three_edge();
        let all: Vec<_> = g.edge_stream(g.full_interval()).collect();
        assert_eq!(all.len(), 3);
        assert!(all.windows(2).all(|w| w[0].t <= w[1].t));
        assert_eq!(g.edge_stream(Interval::empty()).count(), 0);
    }

    #[test]
    fn stream_flags_repeated_pair() {
        let g = graph("0 1 1\n1 0 2");
        let flags: Vec<bool> = g
            .edge_stream(g.full_interval())
            .map(|e| e.duplicate)
            .collect();
        assert_eq!(flags, vec![false, true]);
    }

    #[test]
    fn static_graph_helpers() {
        let h = StaticGraph::with_nodes([9], [(1, 2), (2, 3), (3, 1), (1, 1)]);
        assert_eq!(h.node_count(), 4);
        assert_eq!(h.edge_count(), 3);
        assert!(h.has_edge(3, 2));
        assert!(!h.has_edge(9, 1));
        assert_eq!(h.density_of(&[1, 2, 3]), 1.0);
        assert_eq!(h.induced(&[1, 2, 9]).edge_count(), 1);
    }
}
