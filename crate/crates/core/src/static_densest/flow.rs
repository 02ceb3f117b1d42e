//! Dinic max-flow on integer capacities, sized for the densest-subgraph network.

use std::collections::VecDeque;

#[derive(Debug, Clone)]
struct Arc {
    to: usize,
    cap: i64,
    rev: usize,
}

#[derive(Debug, Clone)]
pub(crate) struct Dinic {
    graph: Vec<Vec<Arc>>,
    level: Vec<i32>,
    next: Vec<usize>,
}

impl Dinic {
    pub(crate) fn new(n: usize) -> Self {
        Self {
            graph: vec![Vec::new(); n],
            level: vec![-1; n],
            next: vec![0; n],
        }
    }

    pub(crate) fn add_edge(&mut self, from: usize, to: usize, cap: i64) {
        self.add_pair(from, to, cap, 0);
    }

    /// Two arcs that are each other's residual: `from -> to` with `cap`,
    /// `to -> from` with `back_cap`.
    pub(crate) fn add_pair(&mut self, from: usize, to: usize, cap: i64, back_cap: i64) {
        let rf = self.graph[to].len();
        let rt = self.graph[from].len();
        self.graph[from].push(Arc { to, cap, rev: rf });
        self.graph[to].push(Arc {
            to: from,
            cap: back_cap,
            rev: rt,
        });
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.iter_mut().for_each(|l| *l = -1);
        let mut queue = VecDeque::new();
        self.level[s] = 0;
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            for a in &self.graph[v] {
                if a.cap > 0 && self.level[a.to] < 0 {
                    self.level[a.to] = self.level[v] + 1;
                    queue.push_back(a.to);
                }
            }
        }
        self.level[t] >= 0
    }

    fn dfs(&mut self, v: usize, t: usize, pushed: i64) -> i64 {
        if v == t {
            return pushed;
        }
        while self.next[v] < self.graph[v].len() {
            let i = self.next[v];
            let Arc { to, cap, rev } = self.graph[v][i];
            if cap > 0 && self.level[to] == self.level[v] + 1 {
                let got = self.dfs(to, t, pushed.min(cap));
                if got > 0 {
                    self.graph[v][i].cap -= got;
                    self.graph[to][rev].cap += got;
                    return got;
                }
            }
            self.next[v] += 1;
        }
        0
    }

    pub(crate) fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        let mut flow = 0;
        while self.bfs(s, t) {
            self.next.iter_mut().for_each(|x| *x = 0);
            loop {
                let f = self.dfs(s, t, i64::MAX);
                if f == 0 {
                    break;
                }
                flow += f;
            }
        }
        flow
    }

    /// Nodes reachable from `s` through arcs with residual capacity.
    pub(crate) fn reachable_from(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.graph.len()];
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(v) = stack.pop() {
            for a in &self.graph[v] {
                if a.cap > 0 && !seen[a.to] {
                    seen[a.to] = true;
                    stack.push(a.to);
                }
            }
        }
        seen
    }

    /// Nodes that can still reach `t` through arcs with residual capacity.
    pub(crate) fn reaching(&self, t: usize) -> Vec<bool> {
        let n = self.graph.len();
        // reverse residual adjacency
        let mut rev: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (v, arcs) in self.graph.iter().enumerate() {
            for a in arcs {
                if a.cap > 0 {
                    rev[a.to].push(v);
                }
            }
        }
        let mut seen = vec![false; n];
        let mut stack = vec![t];
        seen[t] = true;
        while let Some(v) = stack.pop() {
            for &u in &rev[v] {
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        seen
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn textbook_network() {
        let mut d = Dinic::new(6);
        d.add_edge(0, 1, 10);
        d.add_edge(0, 2, 10);
        d.add_edge(1, 3, 4);
        d.add_edge(1, 4, 8);
        d.add_edge(2, 4, 9);
        d.add_edge(3, 5, 10);
        d.add_edge(4, 3, 6);
        d.add_edge(4, 5, 10);
        assert_eq!(d.max_flow(0, 5), 19);
    }

    #[test]
    fn disconnected_sink() {
        let mut d = Dinic::new(4);
        d.add_edge(0, 1, 10);
        d.add_edge(2, 3, 5);
        assert_eq!(d.max_flow(0, 3), 0);
        let side = d.reachable_from(0);
        assert_eq!(side, vec![true, true, false, false]);
    }

    #[test]
    fn undirected_pair_carries_both_ways() {
        let mut d = Dinic::new(3);
        d.add_edge(0, 2, 5);
        d.add_pair(2, 1, 3, 3);
        d.add_edge(1, 0, 1);
        assert_eq!(d.max_flow(0, 1), 3);
    }
}
