use std::collections::VecDeque;
use std::fmt::Debug;
use std::ops::{Add, Sub};

/// Arc capacity type. Integer types give exact flows.
pub trait Capacity: Copy + PartialOrd + Add<Output = Self> + Sub<Output = Self> + Debug {
    fn zero() -> Self;
}

impl Capacity for i64 {
    fn zero() -> Self {
        0
    }
}

impl Capacity for i128 {
    fn zero() -> Self {
        0
    }
}

impl Capacity for f64 {
    fn zero() -> Self {
        0.0
    }
}

/// Flow network solved with Dinic's algorithm.
///
/// Arcs are stored in pairs: arc `2i` is the forward arc, `2i + 1` its
/// residual twin. [`FlowNetwork::blocking_phase`] exposes a single phase so
/// callers can interleave their own tests between phases.
#[derive(Debug, Clone)]
pub struct FlowNetwork<C> {
    source: usize,
    sink: usize,
    head: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<C>,
    orig: Vec<C>,
    value: C,
    level: Vec<i64>,
    iter: Vec<usize>,
}

impl<C: Capacity> FlowNetwork<C> {
    pub fn new(nodes: usize, source: usize, sink: usize) -> Self {
        assert!(source < nodes && sink < nodes && source != sink);
        Self {
            source,
            sink,
            head: vec![Vec::new(); nodes],
            to: Vec::new(),
            cap: Vec::new(),
            orig: Vec::new(),
            value: C::zero(),
            level: vec![-1; nodes],
            iter: vec![0; nodes],
        }
    }

    pub fn node_count(&self) -> usize {
        self.head.len()
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn sink(&self) -> usize {
        self.sink
    }

    /// Adds an arc and returns its id. Arcs into the source or out of the
    /// sink are rejected.
    pub fn add_arc(&mut self, from: usize, to: usize, cap: C) -> usize {
        assert!(cap >= C::zero(), "negative capacity {cap:?}");
        assert!(
            to != self.source && from != self.sink,
            "arc {from}->{to} touches s/t the wrong way"
        );
        let id = self.to.len();
        self.head[from].push(id);
        self.to.push(to);
        self.cap.push(cap);
        self.orig.push(cap);
        self.head[to].push(id + 1);
        self.to.push(from);
        self.cap.push(C::zero());
        self.orig.push(C::zero());
        id
    }

    /// Flow currently routed on arc `id`.
    pub fn arc_flow(&self, id: usize) -> C {
        self.orig[id] - self.cap[id]
    }

    /// Total flow pushed so far.
    pub fn flow_value(&self) -> C {
        self.value
    }

    fn bfs(&mut self) -> bool {
        self.level.iter_mut().for_each(|l| *l = -1);
        self.level[self.source] = 0;
        let mut queue = VecDeque::from([self.source]);
        while let Some(v) = queue.pop_front() {
            for &e in &self.head[v] {
                let w = self.to[e];
                if self.level[w] < 0 && self.cap[e] > C::zero() {
                    self.level[w] = self.level[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        self.level[self.sink] >= 0
    }

    /// Runs one blocking-flow phase. Returns `false` (and changes nothing)
    /// when the sink is unreachable, i.e. the flow is already maximum.
    pub fn blocking_phase(&mut self) -> bool {
        if !self.bfs() {
            return false;
        }
        self.iter.iter_mut().for_each(|i| *i = 0);
        let (s, t) = (self.source, self.sink);
        let mut path: Vec<usize> = Vec::new();
        let mut v = s;
        loop {
            if v == t {
                let mut bottleneck = self.cap[path[0]];
                for &e in &path[1..] {
                    if self.cap[e] < bottleneck {
                        bottleneck = self.cap[e];
                    }
                }
                let mut first_saturated = None;
                for (i, &e) in path.iter().enumerate() {
                    self.cap[e] = self.cap[e] - bottleneck;
                    self.cap[e ^ 1] = self.cap[e ^ 1] + bottleneck;
                    if first_saturated.is_none() && !(self.cap[e] > C::zero()) {
                        first_saturated = Some(i);
                    }
                }
                self.value = self.value + bottleneck;
                let k = first_saturated.expect("some arc on an augmenting path saturates");
                v = self.to[path[k] ^ 1];
                path.truncate(k);
                continue;
            }
            let mut advanced = false;
            while self.iter[v] < self.head[v].len() {
                let e = self.head[v][self.iter[v]];
                let w = self.to[e];
                if self.cap[e] > C::zero() && self.level[w] == self.level[v] + 1 {
                    path.push(e);
                    v = w;
                    advanced = true;
                    break;
                }
                self.iter[v] += 1;
            }
            if advanced {
                continue;
            }
            if v == s {
                return true;
            }
            self.level[v] = -1;
            let e = path.pop().expect("non-source vertex has a path arc");
            v = self.to[e ^ 1];
            self.iter[v] += 1;
        }
    }

    /// Runs phases until no augmenting path remains and returns the total flow.
    pub fn max_flow(&mut self) -> C {
        while self.blocking_phase() {}
        self.value
    }

    /// BFS distances from the source in the residual network.
    pub fn residual_levels(&self) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.node_count()];
        dist[self.source] = Some(0);
        let mut queue = VecDeque::from([self.source]);
        while let Some(v) = queue.pop_front() {
            let dv = dist[v].unwrap();
            for &e in &self.head[v] {
                let w = self.to[e];
                if dist[w].is_none() && self.cap[e] > C::zero() {
                    dist[w] = Some(dv + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn has_augmenting_path(&self) -> bool {
        self.residual_levels()[self.sink].is_some()
    }

    /// Nodes reachable from the source in the residual network. After
    /// [`FlowNetwork::max_flow`] this is the source side of the minimum cut
    /// with the fewest nodes.
    pub fn source_side(&self) -> Vec<bool> {
        self.residual_levels().iter().map(Option::is_some).collect()
    }

    /// Capacity of the cut `(side, V \ side)` in the original network.
    pub fn cut_capacity(&self, side: &[bool]) -> C {
        let mut total = C::zero();
        for (v, arcs) in self.head.iter().enumerate() {
            if !side[v] {
                continue;
            }
            for &e in arcs {
                if e % 2 == 0 && !side[self.to[e]] {
                    total = total + self.orig[e];
                }
            }
        }
        total
    }
}

/// Convenience wrapper: `(max-flow value, source side of a minimum cut)`.
pub fn max_flow<C: Capacity>(net: &mut FlowNetwork<C>) -> (C, Vec<bool>) {
    let v = net.max_flow();
    (v, net.source_side())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn single_arc() {
        let mut net = FlowNetwork::<i64>::new(2, 0, 1);
        net.add_arc(0, 1, 5);
        assert_eq!(max_flow(&mut net), (5, vec![true, false]));
    }

    #[test]
    fn bottleneck() {
        let mut net = FlowNetwork::<i64>::new(3, 0, 2);
        net.add_arc(0, 1, 3);
        net.add_arc(1, 2, 2);
        assert_eq!(max_flow(&mut net), (2, vec![true, true, false]));
    }

    #[test]
    fn diamond() {
        let mut net = FlowNetwork::<i64>::new(4, 0, 3);
        for (u, v) in [(0, 1), (0, 2), (1, 3), (2, 3)] {
            net.add_arc(u, v, 1);
        }
        assert_eq!(net.max_flow(), 2);
        assert_eq!(net.source_side(), vec![true, false, false, false]);
    }

    #[test]
    fn float_capacities() {
        let mut net = FlowNetwork::<f64>::new(4, 0, 3);
        net.add_arc(0, 1, 1.5);
        net.add_arc(0, 2, 0.25);
        net.add_arc(1, 2, 1.0);
        net.add_arc(1, 3, 0.5);
        net.add_arc(2, 3, 2.0);
        assert_eq!(net.max_flow(), 1.75);
    }

    #[test]
    fn phases_are_observable() {
        // Two disjoint paths of different lengths need two phases.
        let mut net = FlowNetwork::<i64>::new(5, 0, 4);
        net.add_arc(0, 1, 1);
        net.add_arc(1, 4, 1);
        net.add_arc(0, 2, 1);
        net.add_arc(2, 3, 1);
        net.add_arc(3, 4, 1);
        assert!(net.blocking_phase());
        assert_eq!(net.flow_value(), 1);
        assert!(net.has_augmenting_path());
        assert!(net.blocking_phase());
        assert_eq!(net.flow_value(), 2);
        assert!(!net.blocking_phase());
    }

    fn min_cut_brute(nodes: usize, arcs: &[(usize, usize, i64)]) -> i64 {
        let (s, t) = (0, nodes - 1);
        let mut best = i64::MAX;
        for mask in 0u32..(1 << nodes) {
            if mask & (1 << s) == 0 || mask & (1 << t) != 0 {
                continue;
            }
            let cut = arcs
                .iter()
                .filter(|&&(u, v, _)| mask & (1 << u) != 0 && mask & (1 << v) == 0)
                .map(|&(_, _, c)| c)
                .sum();
            best = best.min(cut);
        }
        best
    }

    proptest! {
        #[test]
        fn max_flow_equals_min_cut(
            nodes in 2usize..=12,
            raw in proptest::collection::vec((0usize..12, 0usize..12, 0i64..10), 0..40),
        ) {
            let (s, t) = (0, nodes - 1);
            let arcs: Vec<_> = raw
                .into_iter()
                .map(|(u, v, c)| (u % nodes, v % nodes, c))
                .filter(|&(u, v, _)| u != v && v != s && u != t)
                .collect();
            let mut net = FlowNetwork::<i64>::new(nodes, s, t);
            for &(u, v, c) in &arcs {
                net.add_arc(u, v, c);
            }
            let (value, side) = max_flow(&mut net);
            prop_assert_eq!(value, min_cut_brute(nodes, &arcs));
            prop_assert_eq!(net.cut_capacity(&side), value);
        }
    }
}
