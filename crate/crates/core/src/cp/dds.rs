use std::cmp::Ordering;

use crate::error::{DsdError, Result};
use crate::exact::cmp_directed;
use crate::flow::{dds_denser_than, h_value, RatioSolution};
use crate::graph::DirectedGraph;
use crate::verify::pava_directed_scan;

use super::{Schedule, Strategy, FIRST_CHECKPOINT};

/// State of the convex program at ratio `c`.
///
/// Arc `e = (u, v)` splits its unit into `alpha[e]` for `u` (as a member of
/// `S`) and `1 − alpha[e]` for `v` (as a member of `T`), with
/// `w_alpha(u) = 2√c Σ α` and `w_beta(v) = (2/√c) Σ β`. For every feasible
/// state and every pair, `ρ_c(S,T) ≤ max(max w_alpha, max w_beta)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DdsState {
    pub c: f64,
    pub alpha: Vec<f64>,
    pub w_alpha: Vec<f64>,
    pub w_beta: Vec<f64>,
}

impl DdsState {
    fn refresh(&mut self, d: &DirectedGraph) {
        let (ka, kb) = (2.0 * self.c.sqrt(), 2.0 / self.c.sqrt());
        self.w_alpha.iter_mut().for_each(|x| *x = 0.0);
        self.w_beta.iter_mut().for_each(|x| *x = 0.0);
        for (e, &(u, v)) in d.edges().iter().enumerate() {
            self.w_alpha[u] += ka * self.alpha[e];
            self.w_beta[v] += kb * (1.0 - self.alpha[e]);
        }
    }

    /// Largest vertex weight on either side; an upper bound on every `ρ_c`.
    pub fn upper_bound(&self) -> f64 {
        self.w_alpha.iter().chain(&self.w_beta).copied().fold(0.0, f64::max)
    }

    /// `Σ w_α² / (2√c) + (√c / 2) Σ w_β²`.
    pub fn objective(&self) -> f64 {
        let sc = self.c.sqrt();
        self.w_alpha.iter().map(|x| x * x).sum::<f64>() / (2.0 * sc)
            + sc / 2.0 * self.w_beta.iter().map(|x| x * x).sum::<f64>()
    }
}

/// Every arc split evenly.
pub fn init_state_dds(d: &DirectedGraph, c: f64) -> Result<DdsState> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(DsdError::InvalidParameter(format!("ratio must be positive, got {c}")));
    }
    if d.m() == 0 {
        return Err(DsdError::EmptyGraph);
    }
    let mut st = DdsState {
        c,
        alpha: vec![0.5; d.m()],
        w_alpha: vec![0.0; d.n()],
        w_beta: vec![0.0; d.n()],
    };
    st.refresh(d);
    Ok(st)
}

/// One Frank-Wolfe (or MWU) step: each arc moves towards the side whose
/// weight is smaller, ties going to the tail.
pub fn vwu_step_dds(d: &DirectedGraph, state: &mut DdsState, t: u64, schedule: Schedule) {
    assert!(t >= 1, "steps are numbered from 1");
    let gamma = schedule.gamma(t);
    match schedule.strategy {
        Strategy::Sequential => {
            let wa = state.w_alpha.clone();
            let wb = state.w_beta.clone();
            for (e, &(u, v)) in d.edges().iter().enumerate() {
                let target = if wa[u] <= wb[v] { 1.0 } else { 0.0 };
                state.alpha[e] = (1.0 - gamma) * state.alpha[e] + gamma * target;
            }
            state.refresh(d);
        }
        Strategy::Simultaneous => {
            let (ka, kb) = (2.0 * state.c.sqrt(), 2.0 / state.c.sqrt());
            for (e, &(u, v)) in d.edges().iter().enumerate() {
                let target = if state.w_alpha[u] <= state.w_beta[v] { 1.0 } else { 0.0 };
                let old = state.alpha[e];
                let new = (1.0 - gamma) * old + gamma * target;
                state.alpha[e] = new;
                state.w_alpha[u] += ka * (new - old);
                state.w_beta[v] -= kb * (new - old);
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum RatioCpMode {
    Exact,
    Approx(f64),
}

/// Slack for comparing float bounds against exact densities.
const TOL: f64 = 1e-9;

/// Solves ratio `a/b` on `d` with Frank-Wolfe style updates.
///
/// `best_global` is the best plain directed density known so far: once the
/// upper bound drops below it this ratio cannot improve the answer and the
/// solve stops early. The returned `upper` is always a valid bound on the
/// best c-biased density of `d`.
pub(crate) fn solve_ratio_cp(
    d: &DirectedGraph,
    a: u64,
    b: u64,
    schedule: Schedule,
    mode: RatioCpMode,
    best_global: f64,
    cap: u64,
) -> RatioSolution {
    if d.m() == 0 {
        return RatioSolution {
            pair: None,
            upper: 0.0,
            iterations: 0,
        };
    }
    let c = a as f64 / b as f64;
    let scale = 2.0 * ((a * b) as f64).sqrt();
    let q = ((a + b) * d.n() as u64) as f64;
    let mut state = init_state_dds(d, c).expect("nonempty graph");

    let mut pair: Option<(Vec<usize>, Vec<usize>)> = None;
    let mut pair_key = (0u64, 1u64, 1u64);
    // Best (|E(S,T)|, b|S| + a|T|) seen so far at this ratio.
    let mut cand_h = (0u64, 1u64);
    let mut offer =
        |s: Vec<usize>, t: Vec<usize>, pair: &mut Option<(Vec<usize>, Vec<usize>)>, cand_h: &mut (u64, u64)| {
            let hv = h_value(d, a, b, &s, &t);
            if hv.0 as u128 * cand_h.1 as u128 > cand_h.0 as u128 * hv.1 as u128 {
                *cand_h = hv;
            }
            let key = (hv.0, s.len() as u64, t.len() as u64);
            if pair.is_none()
                || cmp_directed(key.0, key.1, key.2, pair_key.0, pair_key.1, pair_key.2) == Ordering::Greater
            {
                pair_key = key;
                *pair = Some((s, t));
            }
        };

    let mut upper = f64::INFINITY;
    let mut next_check = FIRST_CHECKPOINT.min(cap);
    let mut flow_checked: Option<(u64, u64)> = None;
    let mut t = 0;
    while t < cap {
        t += 1;
        vwu_step_dds(d, &mut state, t, schedule);
        if t != next_check && t != cap {
            continue;
        }
        next_check = (next_check * 2).min(cap);
        let scan = pava_directed_scan(d, &state.w_alpha, &state.w_beta, c).expect("graph has an arc");
        offer(scan.best.0, scan.best.1, &mut pair, &mut cand_h);
        offer(scan.best_biased.0, scan.best_biased.1, &mut pair, &mut cand_h);
        upper = upper.min(state.upper_bound());
        let lower = scale * cand_h.0 as f64 / cand_h.1 as f64;
        match mode {
            RatioCpMode::Exact => {
                if upper - lower < scale / (q * (q - 1.0)).max(1.0) - TOL {
                    upper = lower;
                    break;
                }
                if upper - lower <= 0.01 * upper && flow_checked != Some(cand_h) {
                    flow_checked = Some(cand_h);
                    match dds_denser_than(d, a as i128, b as i128, cand_h.0 as i128, cand_h.1 as i128) {
                        None => {
                            upper = lower;
                            break;
                        }
                        Some((s, tt)) => offer(s, tt, &mut pair, &mut cand_h),
                    }
                }
                if upper <= best_global * (1.0 + 1e-12) {
                    break;
                }
            }
            RatioCpMode::Approx(eps) => {
                if upper <= (1.0 + eps) * lower || upper <= (1.0 + eps) * best_global {
                    break;
                }
            }
        }
    }
    RatioSolution {
        pair,
        upper,
        iterations: t,
    }
}
