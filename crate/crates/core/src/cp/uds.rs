use std::time::Instant;

use log::debug;

use crate::cores::{core_numbers, strict_threshold};
use crate::error::{DsdError, Result};
use crate::flow::BestSet;
use crate::graph::UndirectedGraph;
use crate::result::{DsResult, RunStats};
use crate::verify::{contains_all_densest, pava_extract, verify_exact_cp, weight_order};

use super::{CpOptions, Method, Schedule, StopRule, Strategy, DEFAULT_ITER_CAP, FIRST_CHECKPOINT};

/// Edge shares and vertex weights for the undirected convex program.
///
/// `share[e]` is the part of edge `e = (u, v)` (`u < v`, canonical order)
/// assigned to `u`; `v` receives `1 - share[e]`. Storing one number per
/// edge keeps the two shares summing to one by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct UdsState {
    pub share: Vec<f64>,
    pub w: Vec<f64>,
}

impl UdsState {
    pub(crate) fn from_shares(g: &UndirectedGraph, share: Vec<f64>) -> Self {
        let mut w = vec![0.0; g.n()];
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            w[u] += share[e];
            w[v] += 1.0 - share[e];
        }
        Self { share, w }
    }

    fn refresh(&mut self, g: &UndirectedGraph) {
        self.w.iter_mut().for_each(|x| *x = 0.0);
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            self.w[u] += self.share[e];
            self.w[v] += 1.0 - self.share[e];
        }
    }

    /// Share of edge `e` held by endpoint `toward`.
    pub fn alpha(&self, g: &UndirectedGraph, e: usize, toward: usize) -> f64 {
        let (u, v) = g.edges()[e];
        if toward == u {
            self.share[e]
        } else {
            assert_eq!(toward, v, "vertex {toward} is not an endpoint of edge {e}");
            1.0 - self.share[e]
        }
    }

    /// `Σ_u w(u)²`.
    pub fn objective(&self) -> f64 {
        self.w.iter().map(|x| x * x).sum()
    }
}

/// All shares `1/2`, so `w` is half the degree.
pub fn init_state_uds(g: &UndirectedGraph) -> Result<UdsState> {
    if g.m() == 0 {
        return Err(DsdError::EmptyGraph);
    }
    Ok(UdsState::from_shares(g, vec![0.5; g.m()]))
}

/// One Frank-Wolfe or MWU step: every edge moves a `γ_t` fraction of its
/// unit towards its currently lighter endpoint (ties: smaller id).
pub fn vwu_step(g: &UndirectedGraph, state: &mut UdsState, t: u64, schedule: Schedule) {
    assert!(t >= 1, "steps are numbered from 1");
    let gamma = schedule.gamma(t);
    match schedule.strategy {
        Strategy::Sequential => {
            let snapshot = state.w.clone();
            for (e, &(u, v)) in g.edges().iter().enumerate() {
                let target = if snapshot[u] <= snapshot[v] { 1.0 } else { 0.0 };
                state.share[e] = (1.0 - gamma) * state.share[e] + gamma * target;
            }
            state.refresh(g);
        }
        Strategy::Simultaneous => {
            for (e, &(u, v)) in g.edges().iter().enumerate() {
                let target = if state.w[u] <= state.w[v] { 1.0 } else { 0.0 };
                let old = state.share[e];
                let new = (1.0 - gamma) * old + gamma * target;
                state.share[e] = new;
                state.w[u] += new - old;
                state.w[v] -= new - old;
            }
        }
    }
}

/// Nesterov momentum for [`fista_step`].
#[derive(Debug, Clone)]
pub struct Momentum {
    prev: Vec<f64>,
    theta: f64,
    eta: f64,
}

impl Momentum {
    /// Starts with zero velocity and step size `1/(2Δ)`.
    pub fn new(g: &UndirectedGraph, state: &UdsState) -> Self {
        Self {
            prev: state.share.clone(),
            theta: 1.0,
            eta: 1.0 / (2.0 * g.max_degree().max(1) as f64),
        }
    }
}

/// One accelerated projected-gradient step on `Σ w²`.
///
/// The extrapolated point `y` takes a gradient step of size `1/(2Δ)` (in
/// units of half the gradient `2(w(u) − w(v))`), and each edge's share is
/// clamped back to `[0, 1]`, which is the exact projection onto
/// `{α_uv + α_vu = 1, α ≥ 0}`.
pub fn fista_step(g: &UndirectedGraph, state: &mut UdsState, momentum: &mut Momentum) {
    let theta_next = (1.0 + (1.0 + 4.0 * momentum.theta * momentum.theta).sqrt()) / 2.0;
    let beta = (momentum.theta - 1.0) / theta_next;
    let y: Vec<f64> = state
        .share
        .iter()
        .zip(&momentum.prev)
        .map(|(&x, &p)| x + beta * (x - p))
        .collect();
    let mut wy = vec![0.0; g.n()];
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        wy[u] += y[e];
        wy[v] += 1.0 - y[e];
    }
    let next: Vec<f64> = g
        .edges()
        .iter()
        .enumerate()
        .map(|(e, &(u, v))| (y[e] - momentum.eta * (wy[u] - wy[v])).clamp(0.0, 1.0))
        .collect();
    momentum.prev = std::mem::replace(&mut state.share, next);
    momentum.theta = theta_next;
    state.refresh(g);
}

/// Bounds observed at one checkpoint of [`solve_cp_uds`].
#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoint {
    pub iteration: u64,
    /// Density of the extracted candidate.
    pub lower: f64,
    /// Upper bound from the current weights.
    pub upper: f64,
    /// Edges of the working graph.
    pub edges: usize,
}

#[derive(Debug, Clone)]
pub struct CpOutcome {
    /// Final state on the input graph. Edges dropped by reductions keep the
    /// share they had when they were dropped.
    pub state: UdsState,
    pub result: DsResult,
    pub checkpoints: Vec<Checkpoint>,
}

/// `max_i min{C(i,2), ⌊W_i⌋} / i` as an exact fraction `(edges, vertices)`.
fn integral_bound_frac(w: &[f64]) -> (u64, u64) {
    let order = weight_order(w);
    let mut prefix = 0.0;
    let mut best = (0u64, 1u64);
    for (idx, &v) in order.iter().enumerate() {
        let i = (idx + 1) as u64;
        prefix += w[v];
        let room = (i * (i - 1) / 2).min((prefix + 1e-9).floor().max(0.0) as u64);
        if room as u128 * best.1 as u128 > best.0 as u128 * i as u128 {
            best = (room, i);
        }
    }
    best
}

/// `hi − lo < 1/(k(k−1))` for fractions `hi = a/b`, `lo = c/d`.
fn frac_gap_below(a: u64, b: u64, c: u64, d: u64, k: u64) -> bool {
    if k < 2 {
        return true;
    }
    let diff = a as i128 * d as i128 - c as i128 * b as i128;
    diff * (k as i128) * (k as i128 - 1) < b as i128 * d as i128
}

struct Work {
    graph: UndirectedGraph,
    to_parent: Vec<usize>,
    /// Index of each working edge in the input graph.
    edge_to_orig: Vec<usize>,
}

impl Work {
    /// Restricts to `keep` (working ids), carrying the shares along.
    fn restrict(&mut self, keep: &[usize], state: &mut UdsState, full_share: &mut [f64]) {
        for (e, &orig) in self.edge_to_orig.iter().enumerate() {
            full_share[orig] = state.share[e];
        }
        let sub = self.graph.induced_subgraph(keep).expect("ids in range");
        let mut share = Vec::with_capacity(sub.graph.m());
        let mut edge_to_orig = Vec::with_capacity(sub.graph.m());
        for &(a, b) in sub.graph.edges() {
            let key = (sub.to_parent[a], sub.to_parent[b]);
            let e = self
                .graph
                .edges()
                .binary_search(&key)
                .expect("induced edge exists in parent");
            share.push(state.share[e]);
            edge_to_orig.push(self.edge_to_orig[e]);
        }
        self.to_parent = sub.to_parent.iter().map(|&v| self.to_parent[v]).collect();
        self.edge_to_orig = edge_to_orig;
        *state = UdsState::from_shares(&sub.graph, share);
        self.graph = sub.graph;
    }
}

/// Runs Frank-Wolfe, MWU or FISTA on the undirected convex program.
///
/// Every checkpoint (iteration 16, then doubling, plus the last iteration)
/// extracts a candidate by [`pava_extract`] and tightens the upper bound
/// with the integral prefix bound. Exact mode stops when either the gap is
/// below the distinctness threshold or [`verify_exact_cp`] accepts.
pub fn solve_cp_uds(g: &UndirectedGraph, schedule: Schedule, stop: StopRule, opts: &CpOptions) -> Result<CpOutcome> {
    let start = Instant::now();
    if g.m() == 0 {
        return Err(DsdError::EmptyGraph);
    }
    if let StopRule::TargetRatio(eps) = stop {
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(DsdError::InvalidParameter(format!("eps must be positive, got {eps}")));
        }
    }
    let cap = match stop {
        StopRule::Iters(t) => t,
        _ => opts.iter_cap.unwrap_or(DEFAULT_ITER_CAP),
    };

    let cores = core_numbers(g);
    let mut best = BestSet::new(g, cores.k_core(cores.k_star));
    // Upper bound as an exact fraction; k* bounds the optimum.
    let mut upper = (cores.k_star as u64, 1u64);
    let mut stats = RunStats {
        edge_trace: vec![g.m()],
        ..RunStats::default()
    };
    let mut checkpoints = Vec::new();

    let mut state = init_state_uds(g)?;
    let mut full_share = state.share.clone();
    let mut work = Work {
        graph: g.clone(),
        to_parent: (0..g.n()).collect(),
        edge_to_orig: (0..g.m()).collect(),
    };
    let mut threshold = 0usize;
    let mut maybe_reduce =
        |work: &mut Work, state: &mut UdsState, full: &mut [f64], lower: f64, stats: &mut RunStats| -> bool {
            let k = strict_threshold(lower);
            if k <= threshold {
                return false;
            }
            threshold = k;
            let keep = core_numbers(&work.graph).k_core(k);
            if keep.is_empty() || keep.len() == work.graph.n() {
                return false;
            }
            work.restrict(&keep, state, full);
            stats.reductions += 1;
            stats.edge_trace.push(work.graph.m());
            debug!("cp reduction to {k}-core: n={} m={}", work.graph.n(), work.graph.m());
            true
        };
    if opts.multi_reduction {
        maybe_reduce(
            &mut work,
            &mut state,
            &mut full_share,
            cores.k_star as f64 / 2.0,
            &mut stats,
        );
    }

    let mut momentum = Momentum::new(&work.graph, &state);
    let mut next_check = FIRST_CHECKPOINT.min(cap);
    let mut verified = false;
    let mut t = 0u64;
    while t < cap {
        t += 1;
        match schedule.method {
            Method::Fista => fista_step(&work.graph, &mut state, &mut momentum),
            Method::FrankWolfe | Method::Mwu => vwu_step(&work.graph, &mut state, t, schedule),
        }
        if t != next_check && t != cap {
            continue;
        }
        next_check = (next_check * 2).min(cap);

        let mut local = pava_extract(&work.graph, &state.w)?;
        let lifted: Vec<usize> = local.iter().map(|&v| work.to_parent[v]).collect();
        best.offer(g, lifted);
        let ub = integral_bound_frac(&state.w);
        if (ub.0 as u128) * (upper.1 as u128) < (upper.0 as u128) * (ub.1 as u128) {
            upper = ub;
        }
        let (be, bs) = (best.edges, best.set.len() as u64);
        checkpoints.push(Checkpoint {
            iteration: t,
            lower: best.density(),
            upper: upper.0 as f64 / upper.1 as f64,
            edges: work.graph.m(),
        });

        if opts.multi_reduction && local.len() < work.graph.n() {
            let mut inside = vec![false; work.graph.n()];
            for &v in &local {
                inside[v] = true;
            }
            if contains_all_densest(&work.graph, &inside, &state).is_some() {
                local.sort_unstable();
                work.restrict(&local, &mut state, &mut full_share);
                stats.reductions += 1;
                stats.edge_trace.push(work.graph.m());
                debug!("cp reduction to stable set: n={} m={}", work.graph.n(), work.graph.m());
                momentum = Momentum::new(&work.graph, &state);
                local = (0..work.graph.n()).collect();
            }
        }

        let k = (work.graph.n() as u64).max(bs);
        let certified = frac_gap_below(upper.0, upper.1, be, bs, k)
            || (matches!(stop, StopRule::Exact) && verify_exact_cp(&work.graph, &local, &state)?);
        if certified {
            if !frac_gap_below(upper.0, upper.1, be, bs, k) {
                // The verifier accepted the extracted set itself.
                let lifted: Vec<usize> = local.iter().map(|&v| work.to_parent[v]).collect();
                best = BestSet::new(g, lifted);
            }
            verified = true;
        }
        match stop {
            StopRule::Exact if certified => break,
            StopRule::TargetRatio(eps) => {
                if (upper.0 as f64 / upper.1 as f64) <= (1.0 + eps) * best.density() {
                    verified = true;
                    break;
                }
            }
            _ => {}
        }
        if opts.multi_reduction && maybe_reduce(&mut work, &mut state, &mut full_share, best.density(), &mut stats) {
            momentum = Momentum::new(&work.graph, &state);
        }
    }

    for (e, &orig) in work.edge_to_orig.iter().enumerate() {
        full_share[orig] = state.share[e];
    }
    let mut result = DsResult::undirected(g, best.set)?;
    result.verified = verified;
    stats.iterations = t;
    stats.elapsed = start.elapsed();
    result.stats = stats;
    Ok(CpOutcome {
        state: UdsState::from_shares(g, full_share),
        result,
        checkpoints,
    })
}
