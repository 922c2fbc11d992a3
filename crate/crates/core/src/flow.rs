//! Unit-capacity augmenting-path max-flow used by the cut queries.

use std::collections::VecDeque;

pub(crate) struct FlowNetwork {
    head: Vec<usize>,
    cap: Vec<usize>,
    adj: Vec<Vec<usize>>,
}

impl FlowNetwork {
    pub(crate) fn new(nodes: usize) -> Self {
        Self {
            head: Vec::new(),
            cap: Vec::new(),
            adj: vec![Vec::new(); nodes],
        }
    }

    /// Adds an arc and its residual twin. Arc `k` and `k ^ 1` are paired.
    pub(crate) fn add_arc(&mut self, from: usize, to: usize, cap: usize) {
        self.adj[from].push(self.head.len());
        self.head.push(to);
        self.cap.push(cap);
        self.adj[to].push(self.head.len());
        self.head.push(from);
        self.cap.push(0);
    }

    /// Edmonds-Karp. Stops early once the flow reaches `limit`.
    pub(crate) fn max_flow(&mut self, source: usize, sink: usize, limit: usize) -> usize {
        let mut flow = 0;
        let n = self.adj.len();
        while flow < limit {
            let mut parent_arc = vec![usize::MAX; n];
            let mut seen = vec![false; n];
            seen[source] = true;
            let mut queue = VecDeque::from([source]);
            while let Some(v) = queue.pop_front() {
                if v == sink {
                    break;
                }
                for &a in &self.adj[v] {
                    let w = self.head[a];
                    if self.cap[a] > 0 && !seen[w] {
                        seen[w] = true;
                        parent_arc[w] = a;
                        queue.push_back(w);
                    }
                }
            }
            if !seen[sink] {
                break;
            }
            let mut bottleneck = usize::MAX;
            let mut v = sink;
            while v != source {
                let a = parent_arc[v];
                bottleneck = bottleneck.min(self.cap[a]);
                v = self.head[a ^ 1];
            }
            let push = bottleneck.min(limit - flow);
            let mut v = sink;
            while v != source {
                let a = parent_arc[v];
                self.cap[a] -= push;
                self.cap[a ^ 1] += push;
                v = self.head[a ^ 1];
            }
            flow += push;
        }
        flow
    }
}
