//! Dinic's max-flow on small integer-capacity networks.
//!
//! Instances here are tiny bipartite graphs (one node per atom), so the
//! only requirements are exact integer flow values and determinism.

pub(crate) struct FlowNetwork {
    adj: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<u64>,
    level: Vec<i32>,
    iter: Vec<usize>,
}

impl FlowNetwork {
    pub fn new(nodes: usize) -> Self {
        Self {
            adj: vec![Vec::new(); nodes],
            to: Vec::new(),
            cap: Vec::new(),
            level: vec![-1; nodes],
            iter: vec![0; nodes],
        }
    }

    /// Adds a directed edge `u -> v`; the reverse edge gets capacity 0.
    pub fn add_edge(&mut self, u: usize, v: usize, cap: u64) {
        let e = self.to.len();
        self.adj[u].push(e);
        self.to.push(v);
        self.cap.push(cap);
        self.adj[v].push(e + 1);
        self.to.push(u);
        self.cap.push(0);
    }

    fn bfs(&mut self, source: usize, sink: usize) -> bool {
        self.level.fill(-1);
        self.level[source] = 0;
        let mut queue = std::collections::VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            for &e in &self.adj[u] {
                let v = self.to[e];
                if self.cap[e] > 0 && self.level[v] < 0 {
                    self.level[v] = self.level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        self.level[sink] >= 0
    }

    fn dfs(&mut self, u: usize, sink: usize, limit: u64) -> u64 {
        if u == sink {
            return limit;
        }
        while self.iter[u] < self.adj[u].len() {
            let e = self.adj[u][self.iter[u]];
            let v = self.to[e];
            if self.cap[e] > 0 && self.level[v] == self.level[u] + 1 {
                let pushed = self.dfs(v, sink, limit.min(self.cap[e]));
                if pushed > 0 {
                    self.cap[e] -= pushed;
                    self.cap[e ^ 1] += pushed;
                    return pushed;
                }
            }
            self.iter[u] += 1;
        }
        0
    }

    pub fn max_flow(&mut self, source: usize, sink: usize) -> u64 {
        let mut flow = 0;
        while self.bfs(source, sink) {
            self.iter.fill(0);
            loop {
                let pushed = self.dfs(source, sink, u64::MAX);
                if pushed == 0 {
                    break;
                }
                flow += pushed;
            }
        }
        flow
    }
}

/// Max flow through the bipartite atom network: source -> left atom i
/// (capacity `left[i]`) -> right atom j when `admit(i, j)` -> sink
/// (capacity `right[j]`).
pub(crate) fn bipartite_max_flow<F>(left: &[u64], right: &[u64], admit: F) -> u64
where
    F: Fn(usize, usize) -> bool,
{
    let nl = left.len();
    let nr = right.len();
    let source = nl + nr;
    let sink = nl + nr + 1;
    let mut net = FlowNetwork::new(nl + nr + 2);
    let middle_cap: u64 = left.iter().sum();
    for (i, &c) in left.iter().enumerate() {
        net.add_edge(source, i, c);
    }
    for (j, &c) in right.iter().enumerate() {
        net.add_edge(nl + j, sink, c);
    }
    for i in 0..nl {
        for j in 0..nr {
            if admit(i, j) {
                net.add_edge(i, nl + j, middle_cap);
            }
        }
    }
    net.max_flow(source, sink)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn saturates_a_perfect_matching() {
        assert_eq!(bipartite_max_flow(&[1, 1], &[1, 1], |i, j| i == j), 2);
    }

    #[test]
    fn respects_right_capacity() {
        assert_eq!(bipartite_max_flow(&[2, 3], &[1, 1], |_, _| true), 2);
    }

    #[test]
    fn no_edges_means_no_flow() {
        assert_eq!(bipartite_max_flow(&[5], &[5], |_, _| false), 0);
    }

    #[test]
    fn partial_adjacency() {
        // left 0 reaches both sinks, left 1 only the second.
        let flow = bipartite_max_flow(&[2, 2], &[2, 2], |i, j| i == 0 || j == 1);
        assert_eq!(flow, 4);
    }

    #[test]
    fn bottleneck_on_shared_target() {
        let flow = bipartite_max_flow(&[1, 1, 1], &[2], |_, _| true);
        assert_eq!(flow, 2);
    }
}
