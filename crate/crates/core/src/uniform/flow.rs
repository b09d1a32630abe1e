use std::collections::VecDeque;

use crate::rational::{self, zero, Rational};

struct Edge {
    to: usize,
    cap: Rational,
    flow: Rational,
}

/// Edmonds-Karp max-flow with exact capacities.
pub(crate) struct FlowNetwork {
    edges: Vec<Edge>,
    adjacent: Vec<Vec<usize>>,
}

impl FlowNetwork {
    pub fn new(nodes: usize) -> Self {
        FlowNetwork { edges: Vec::new(), adjacent: vec![Vec::new(); nodes] }
    }

    /// Adds `from -> to` and returns the edge id.
    pub fn add_edge(&mut self, from: usize, to: usize, cap: Rational) -> usize {
        let id = self.edges.len();
        self.edges.push(Edge { to, cap, flow: zero() });
        self.edges.push(Edge { to: from, cap: zero(), flow: zero() });
        self.adjacent[from].push(id);
        self.adjacent[to].push(id + 1);
        id
    }

    pub fn flow_on(&self, edge: usize) -> &Rational {
        &self.edges[edge].flow
    }

    fn residual(&self, e: usize) -> Rational {
        &self.edges[e].cap - &self.edges[e].flow
    }

    pub fn max_flow(&mut self, source: usize, sink: usize) -> Rational {
        let mut total = zero();
        loop {
            let mut parent: Vec<Option<usize>> = vec![None; self.adjacent.len()];
            let mut queue = VecDeque::from([source]);
            let mut seen = vec![false; self.adjacent.len()];
            seen[source] = true;
            while let Some(u) = queue.pop_front() {
                if u == sink {
                    break;
                }
                for &e in &self.adjacent[u] {
                    let v = self.edges[e].to;
                    if !seen[v] && self.residual(e) > zero() {
                        seen[v] = true;
                        parent[v] = Some(e);
                        queue.push_back(v);
                    }
                }
            }
            if !seen[sink] {
                return total;
            }
            let mut path = Vec::new();
            let mut v = sink;
            while let Some(e) = parent[v] {
                path.push(e);
                v = self.edges[e ^ 1].to;
            }
            let push = path.iter().map(|&e| self.residual(e)).reduce(|a, b| rational::min(&a, &b)).unwrap_or_else(zero);
            for &e in &path {
                self.edges[e].flow += &push;
                self.edges[e ^ 1].flow -= &push;
            }
            total += push;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn bottleneck_and_rerouting() {
        // s=0, a=1, b=2, t=3; classic case needing a reverse-edge reroute.
        let mut net = FlowNetwork::new(4);
        net.add_edge(0, 1, rat(1, 1));
        net.add_edge(0, 2, rat(1, 1));
        net.add_edge(1, 2, rat(1, 1));
        net.add_edge(1, 3, rat(1, 2));
        net.add_edge(2, 3, rat(1, 1));
        assert_eq!(net.max_flow(0, 3), rat(3, 2));
    }
}
