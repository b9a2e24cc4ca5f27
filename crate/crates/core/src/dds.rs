//! Ratio-space search for the directed problem.
//!
//! A densest pair `(S, T)` has some ratio `|S|/|T|` in the finite set of
//! candidate ratios. Each probed ratio `c` is solved as a c-biased problem,
//! and the resulting upper bound prunes nearby ratios: a pair with ratio `r`
//! satisfies `ρ(S,T) = ρ_c(S,T) / pf(c, r)` where `pf` is
//! [`ratio_prefactor`].

use std::cmp::Ordering;
use std::time::Instant;

use log::debug;

use crate::cores::{reduce_dds, xy_core_max_product};
use crate::cp::{solve_ratio_cp, RatioCpMode, Schedule, DEFAULT_ITER_CAP};
use crate::error::{DsdError, Result};
use crate::exact::cmp_directed;
use crate::flow::{solve_ratio_flow, RatioSolution};
use crate::graph::{ratio_prefactor, DirectedGraph};
use crate::result::{DsResult, RunStats};

/// A candidate ratio `a/b` in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ratio {
    pub a: u64,
    pub b: u64,
}

impl Ratio {
    pub fn value(&self) -> f64 {
        self.a as f64 / self.b as f64
    }
}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ratio {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.a as u128 * other.b as u128).cmp(&(other.a as u128 * self.b as u128))
    }
}

fn gcd(mut x: u64, mut y: u64) -> u64 {
    while y != 0 {
        (x, y) = (y, x % y);
    }
    x
}

/// All reduced fractions `a/b` with `1 ≤ a ≤ max_a`, `1 ≤ b ≤ max_b`, ascending.
pub fn candidate_ratios_bounded(max_a: u64, max_b: u64) -> Vec<Ratio> {
    let mut out: Vec<Ratio> = (1..=max_a)
        .flat_map(|a| {
            (1..=max_b)
                .filter(move |&b| gcd(a, b) == 1)
                .map(move |b| Ratio { a, b })
        })
        .collect();
    out.sort_unstable();
    out
}

/// All reduced fractions `a/b` with `1 ≤ a, b ≤ n`, ascending.
pub fn candidate_ratios(n: usize) -> Vec<Ratio> {
    candidate_ratios_bounded(n as u64, n as u64)
}

/// Upper bound `upper` on every c-biased density at the probed ratio `c`,
/// valid for the graph it was computed on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConquerBound {
    pub c: f64,
    pub upper: f64,
}

impl ConquerBound {
    pub fn new(c: f64, upper: f64) -> Self {
        Self { c, upper }
    }

    /// Bound on `ρ(S,T)` for any pair with ratio `r`.
    pub fn bound_at(&self, r: f64) -> f64 {
        self.upper / ratio_prefactor(self.c, r)
    }

    /// Bound over all ratios in `[lo, hi]`. The prefactor is unimodal in
    /// `log r` with its peak at `c`, so the worst case is an endpoint.
    pub fn bound_over(&self, lo: f64, hi: f64) -> f64 {
        self.bound_at(lo).max(self.bound_at(hi))
    }
}

/// `ρ(S,T) ≤ min(Δ⁺ √r, Δ⁻ / √r)` for a pair with ratio `r`, maximised
/// over `[lo, hi]`.
fn degree_bound_over(d: &DirectedGraph, lo: f64, hi: f64) -> f64 {
    let (dout, din) = (d.max_out_degree() as f64, d.max_in_degree() as f64);
    let at = |r: f64| (dout * r.sqrt()).min(din / r.sqrt());
    let peak = din / dout;
    let mut best = at(lo).max(at(hi));
    if lo <= peak && peak <= hi {
        best = best.max(at(peak));
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PerRatioSolver {
    /// Exact binary search on the parametric network; the search for ratio
    /// `a/b` starts at `gamma` times the best known density.
    Flow { gamma: f64 },
    /// Frank-Wolfe style iterations on the ratio's convex program.
    FrankWolfe { schedule: Schedule, iter_cap: Option<u64> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DdsStrategy {
    EnumerateAll,
    DivideConquer,
}

struct Incumbent {
    key: (u64, u64, u64),
    pair: (Vec<usize>, Vec<usize>),
}

impl Incumbent {
    fn density(&self) -> f64 {
        let (e, s, t) = self.key;
        e as f64 / ((s * t) as f64).sqrt()
    }

    fn offer(&mut self, d: &DirectedGraph, s: Vec<usize>, t: Vec<usize>) -> bool {
        let e = d.arcs_between(&s, &t).expect("ids in range") as u64;
        let key = (e, s.len() as u64, t.len() as u64);
        if cmp_directed(key.0, key.1, key.2, self.key.0, self.key.1, self.key.2) == Ordering::Greater {
            self.key = key;
            self.pair = (s, t);
            true
        } else {
            false
        }
    }
}

fn validate(d: &DirectedGraph, eps: f64) -> Result<()> {
    if d.m() == 0 {
        return Err(DsdError::EmptyGraph);
    }
    if !(eps >= 0.0 && eps.is_finite()) {
        return Err(DsdError::InvalidParameter(format!("eps must be >= 0, got {eps}")));
    }
    Ok(())
}

fn initial(d: &DirectedGraph) -> Result<Incumbent> {
    let core = xy_core_max_product(d)?;
    let e = d.arcs_between(&core.s, &core.t)? as u64;
    Ok(Incumbent {
        key: (e, core.s.len() as u64, core.t.len() as u64),
        pair: (core.s, core.t),
    })
}

fn solve_one(d: &DirectedGraph, r: Ratio, solver: PerRatioSolver, eps: f64, best: f64) -> RatioSolution {
    match solver {
        PerRatioSolver::Flow { gamma } => {
            let hint = gamma * best / (2.0 * ((r.a * r.b) as f64).sqrt());
            solve_ratio_flow(d, r.a, r.b, hint)
        }
        PerRatioSolver::FrankWolfe { schedule, iter_cap } => {
            let mode = if eps > 0.0 {
                RatioCpMode::Approx(eps)
            } else {
                RatioCpMode::Exact
            };
            let cap = iter_cap.unwrap_or_else(|| match mode {
                RatioCpMode::Approx(eps) => approx_iter_cap(d, eps),
                RatioCpMode::Exact => DEFAULT_ITER_CAP,
            });
            solve_ratio_cp(d, r.a, r.b, schedule, mode, best, cap)
        }
    }
}

/// `min(DEFAULT_ITER_CAP, ⌈16κm/ε²⌉)` with
/// `κ = Σ_c (√c + 1/√c)·max(√c·d⁺_max, d⁻_max/√c)` over all ratios
/// `c = a/b`, `1 ≤ a, b ≤ n`. Summation stops once the default cap is reached.
fn approx_iter_cap(d: &DirectedGraph, eps: f64) -> u64 {
    let n = d.n() as u64;
    let (dout, din) = (d.max_out_degree() as f64, d.max_in_degree() as f64);
    let scale = 16.0 * d.m() as f64 / (eps * eps);
    let limit = DEFAULT_ITER_CAP as f64;
    let mut kappa = 0.0;
    for a in 1..=n {
        for b in 1..=n {
            if gcd(a, b) != 1 {
                continue;
            }
            let rc = (a as f64 / b as f64).sqrt();
            kappa += (rc + 1.0 / rc) * (rc * dout).max(din / rc);
            if scale * kappa >= limit {
                return DEFAULT_ITER_CAP;
            }
        }
    }
    ((scale * kappa).ceil() as u64).max(1)
}

fn finish(d: &DirectedGraph, best: Incumbent, verified: bool, stats: RunStats, start: Instant) -> Result<DsResult> {
    let (s, t) = best.pair;
    let mut res = DsResult::directed(d, s, t)?;
    res.verified = verified;
    res.stats = stats;
    res.stats.elapsed = start.elapsed();
    Ok(res)
}

/// Index in `c[l..=r]` of the member nearest (in log scale) to `√(c_l c_r)`.
fn geometric_middle(c: &[Ratio], l: usize, r: usize) -> usize {
    let target = (c[l].value().ln() + c[r].value().ln()) / 2.0;
    let p = l + c[l..=r].partition_point(|x| x.value().ln() < target);
    let p = p.min(r);
    if p > l && (c[p - 1].value().ln() - target).abs() <= (c[p].value().ln() - target).abs() {
        p - 1
    } else {
        p
    }
}

struct Interval {
    l: usize,
    r: usize,
    certs: Vec<ConquerBound>,
}

/// Divide and conquer over the candidate ratios.
///
/// Each interval on the stack carries the bounds of the probes whose
/// reduced graphs covered it. An interval is dropped once some bound,
/// maximised over the interval, cannot beat the incumbent (`eps = 0`) or
/// `(1 + eps)` times it. Otherwise the member nearest the geometric middle
/// is probed on the `[x, y]`-core reduction for the interval, and the two
/// sides are pushed. With `adjust_intervals`, intervals wider than a factor
/// of 4 are split before any reduction.
pub fn divide_and_conquer(
    d: &DirectedGraph,
    solver: PerRatioSolver,
    eps: f64,
    adjust_intervals: bool,
) -> Result<DsResult> {
    let start = Instant::now();
    validate(d, eps)?;
    let mut best = initial(d)?;
    let ratios = candidate_ratios_bounded(
        (0..d.n()).filter(|&v| d.out_degree(v) > 0).count() as u64,
        (0..d.n()).filter(|&v| d.in_degree(v) > 0).count() as u64,
    );
    let mut stats = RunStats {
        edge_trace: vec![d.m()],
        ..RunStats::default()
    };
    let slack = if eps > 0.0 { 1.0 + eps } else { 1.0 + 1e-12 };
    let mut verified = true;
    let mut stack = vec![Interval {
        l: 0,
        r: ratios.len() - 1,
        certs: Vec::new(),
    }];

    while let Some(iv) = stack.pop() {
        let (cl, cr) = (ratios[iv.l].value(), ratios[iv.r].value());
        let bound = iv
            .certs
            .iter()
            .map(|cert| cert.bound_over(cl, cr))
            .fold(degree_bound_over(d, cl, cr), f64::min);
        if bound <= best.density() * slack {
            continue;
        }
        if adjust_intervals && iv.r > iv.l && cr / cl > 4.0 {
            let mid = geometric_middle(&ratios, iv.l, iv.r).clamp(iv.l, iv.r - 1);
            stack.push(Interval {
                l: mid + 1,
                r: iv.r,
                certs: iv.certs.clone(),
            });
            stack.push(Interval {
                l: iv.l,
                r: mid,
                certs: iv.certs,
            });
            continue;
        }

        let core = reduce_dds(d, best.density(), cl, cr)?;
        if core.is_empty() {
            continue;
        }
        let sub = d.induced_pair_subgraph(&core.s, &core.t)?;
        if sub.graph.m() < d.m() {
            stats.reductions += 1;
            stats.edge_trace.push(sub.graph.m());
        }
        let p = geometric_middle(&ratios, iv.l, iv.r);
        let probe = ratios[p];
        let sol = solve_one(&sub.graph, probe, solver, eps, best.density());
        stats.ratios_probed += 1;
        stats.iterations += sol.iterations;
        if let Some((s, t)) = sol.pair {
            best.offer(d, sub.lift(&s), sub.lift(&t));
        }
        debug!(
            "probe c={}/{} on [{cl}, {cr}]: m={} upper={} best={}",
            probe.a,
            probe.b,
            sub.graph.m(),
            sol.upper,
            best.density()
        );
        if sol.upper > best.density() * slack + 1e-9 {
            verified = false;
        }
        let mut certs = iv.certs;
        certs.push(ConquerBound::new(probe.value(), sol.upper));
        if p < iv.r {
            stack.push(Interval {
                l: p + 1,
                r: iv.r,
                certs: certs.clone(),
            });
        }
        if p > iv.l {
            stack.push(Interval {
                l: iv.l,
                r: p - 1,
                certs,
            });
        }
    }
    finish(d, best, verified, stats, start)
}

/// Exact flow-based solver: every candidate ratio in turn, or divide and
/// conquer with the flow solver per ratio.
pub fn dds_flow_exact(d: &DirectedGraph, strategy: DdsStrategy, gamma: f64) -> Result<DsResult> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(DsdError::InvalidParameter(format!(
            "gamma must lie in [0, 1], got {gamma}"
        )));
    }
    match strategy {
        DdsStrategy::DivideConquer => divide_and_conquer(d, PerRatioSolver::Flow { gamma }, 0.0, true),
        DdsStrategy::EnumerateAll => {
            let start = Instant::now();
            validate(d, 0.0)?;
            let mut best = initial(d)?;
            let mut stats = RunStats {
                edge_trace: vec![d.m()],
                ..RunStats::default()
            };
            for r in candidate_ratios(d.n()) {
                let sol = solve_one(d, r, PerRatioSolver::Flow { gamma }, 0.0, best.density());
                stats.ratios_probed += 1;
                stats.iterations += sol.iterations;
                if let Some((s, t)) = sol.pair {
                    best.offer(d, s, t);
                }
            }
            finish(d, best, true, stats, start)
        }
    }
}

/// Frank-Wolfe based solver (exact when `eps = 0`).
pub fn dds_cp_solve(d: &DirectedGraph, eps: f64, schedule: Schedule, iter_cap: Option<u64>) -> Result<DsResult> {
    divide_and_conquer(d, PerRatioSolver::FrankWolfe { schedule, iter_cap }, eps, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cp::{Method, Strategy};

    fn r(a: u64, b: u64) -> Ratio {
        Ratio { a, b }
    }

    const FW: Schedule = Schedule {
        method: Method::FrankWolfe,
        strategy: Strategy::Sequential,
    };

    #[test]
    fn approx_cap_follows_kappa() {
        // Ratios 1/2, 1, 2 contribute 3 + 2 + 3, so 16·8·1/0.25 = 512.
        let arc = DirectedGraph::from_edges(2, [(0, 1)]).unwrap();
        assert!((512..=513).contains(&approx_iter_cap(&arc, 0.5)));
        let dense = crate::generate::gen_digraph(30, 0.5, 1).unwrap();
        assert_eq!(approx_iter_cap(&dense, 0.1), DEFAULT_ITER_CAP);
    }

    #[test]
    fn candidate_examples() {
        assert_eq!(candidate_ratios(1), vec![r(1, 1)]);
        assert_eq!(candidate_ratios(2), vec![r(1, 2), r(1, 1), r(2, 1)]);
        assert_eq!(
            candidate_ratios(3),
            vec![r(1, 3), r(1, 2), r(2, 3), r(1, 1), r(3, 2), r(2, 1), r(3, 1)]
        );
    }

    #[test]
    fn prefactor_properties() {
        let cert = ConquerBound::new(2.0, 3.0);
        assert!((cert.bound_at(2.0) - 3.0).abs() < 1e-12);
        let mut last = 3.0;
        for k in 1..20 {
            let r = 2.0 * 1.3f64.powi(k);
            assert!(cert.bound_at(r) > last);
            last = cert.bound_at(r);
        }
        for &(x, y) in &[(0.1, 3.0), (1.0, 1.0), (7.0, 0.5)] {
            assert!(ratio_prefactor(x, y) <= 1.0 + 1e-15);
        }
    }

    #[test]
    fn small_examples() {
        let two_cycle = DirectedGraph::from_edges(2, [(0, 1), (1, 0)]).unwrap();
        let res = dds_flow_exact(&two_cycle, DdsStrategy::DivideConquer, 0.0).unwrap();
        assert_eq!(res.density, 1.0);
        assert!(res.stats.ratios_probed < 3);
        let res = dds_cp_solve(&two_cycle, 0.0, FW, None).unwrap();
        assert_eq!(res.density, 1.0);

        let star = DirectedGraph::from_edges(5, [(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        for strategy in [DdsStrategy::EnumerateAll, DdsStrategy::DivideConquer] {
            let res = dds_flow_exact(&star, strategy, 0.0).unwrap();
            assert_eq!(
                (res.s.clone(), res.t.clone().unwrap(), res.density),
                (vec![0], vec![1, 2, 3, 4], 2.0)
            );
        }
        let res = dds_cp_solve(&star, 0.001, FW, None).unwrap();
        assert!(res.density >= 2.0 / 1.001);

        let k3: Vec<(usize, usize)> = (0..3)
            .flat_map(|u| (0..3).filter(move |&v| v != u).map(move |v| (u, v)))
            .collect();
        let k3 = DirectedGraph::from_edges(3, k3).unwrap();
        assert!((dds_cp_solve(&k3, 0.0, FW, None).unwrap().density - 2.0).abs() < 1e-12);

        let arc = DirectedGraph::from_edges(2, [(0, 1)]).unwrap();
        assert!(dds_cp_solve(&arc, 0.5, FW, None).unwrap().density >= 1.0 / 1.5);
    }

    /// Complete digraph on 3 vertices plus an out-star with 9 leaves. A
    /// bound of the form `ρ(S',T') · pf` at the probe would prune the
    /// star's ratio, but the star (ρ = 3) beats the clique (ρ = 2).
    #[test]
    fn star_hidden_beside_clique() {
        let mut arcs: Vec<(usize, usize)> = (0..3)
            .flat_map(|u| (0..3).filter(move |&v| v != u).map(move |v| (u, v)))
            .collect();
        arcs.extend((4..13).map(|v| (3, v)));
        let d = DirectedGraph::from_edges(13, arcs).unwrap();
        for adjust in [true, false] {
            let res = divide_and_conquer(&d, PerRatioSolver::Flow { gamma: 0.0 }, 0.0, adjust).unwrap();
            assert_eq!(res.density, 3.0);
            let res = divide_and_conquer(
                &d,
                PerRatioSolver::FrankWolfe {
                    schedule: FW,
                    iter_cap: None,
                },
                0.0,
                adjust,
            )
            .unwrap();
            assert!((res.density - 3.0).abs() < 1e-12);
        }
    }
}
