//! Simple random walks: exact distributions, variation distance, mixing times and
//! seeded Monte Carlo estimates.
//!
//! Exact rows share the denominator `N1^t` and keep integer numerators, so a row is
//! a vector of walk counts. Monte Carlo trials draw from ChaCha8 with the trial
//! index as stream id; results do not depend on scheduling or thread count.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Pow, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::combinatorics::ln_big;
use crate::counting::{ClosedWalkCounter, ExactProb, WalkVector};
use crate::error::{Error, Result};
use crate::graph::{is_bipartite, ExplicitGraph, GraphParams};
use crate::spectrum::full_spectrum;

/// Identifier of the trial generator. Changing the derivation bumps the suffix.
pub const PRNG_ID: &str = "chacha8-stream-v1";

/// Work limit for exact rows, in adjacency entries touched (`edges * t`).
pub const EXACT_WORK_BUDGET: u64 = 20_000_000_000;

/// Standard-normal quantile used for Wilson intervals unless overridden.
pub const DEFAULT_CI_Z: f64 = 4.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WalkConfig {
    pub steps: u32,
    pub trials: u64,
    pub seed: u64,
}

impl WalkConfig {
    pub fn new(steps: u32, trials: u64, seed: u64) -> Result<Self> {
        if steps == 0 {
            return Err(Error::validation("steps must be at least 1"));
        }
        if trials == 0 {
            return Err(Error::validation("trials must be at least 1"));
        }
        Ok(WalkConfig {
            steps,
            trials,
            seed,
        })
    }
}

/// `P^t(origin, .)` as walk counts over the common denominator `N1^t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistributionRow {
    pub origin: usize,
    pub t: u32,
    pub numerators: Vec<BigUint>,
    pub denominator: BigUint,
}

impl DistributionRow {
    pub fn prob(&self, u: usize) -> ExactProb {
        ExactProb::new(self.numerators[u].clone(), self.denominator.clone())
            .expect("denominator is a positive power")
    }

    pub fn probs(&self) -> Vec<ExactProb> {
        (0..self.numerators.len()).map(|u| self.prob(u)).collect()
    }

    pub fn sums_to_one(&self) -> bool {
        self.numerators.iter().sum::<BigUint>() == self.denominator
    }
}

fn walk_degree(g: &ExplicitGraph) -> Result<usize> {
    match g.regular_degree() {
        Some(0) => Err(Error::domain("graph has no edges; walks are undefined")),
        Some(d) => Ok(d),
        None if g.vertex_count() == 0 => Err(Error::domain("graph has no vertices")),
        None => Err(Error::domain("exact walk rows require a regular graph")),
    }
}

fn check_vertex(g: &ExplicitGraph, x: usize) -> Result<()> {
    if x >= g.vertex_count() {
        return Err(Error::range(format!(
            "vertex {x} not in [0, {})",
            g.vertex_count()
        )));
    }
    Ok(())
}

fn check_budget(g: &ExplicitGraph, t: u32) -> Result<()> {
    let work = (2 * g.edge_count() as u64).max(g.vertex_count() as u64) as f64 * f64::from(t);
    if work > EXACT_WORK_BUDGET as f64 {
        return Err(Error::Feasibility {
            message: format!("exact {t}-step row exceeds work budget {EXACT_WORK_BUDGET}"),
            estimated_cost: work,
        });
    }
    Ok(())
}

/// Exact row of `P^t` from `x` by `t` sparse products.
pub fn transition_row(g: &ExplicitGraph, x: usize, t: u32) -> Result<DistributionRow> {
    check_vertex(g, x)?;
    let d = walk_degree(g)?;
    check_budget(g, t)?;
    let mut w = WalkVector::point_mass(g, x);
    for _ in 0..t {
        w.step();
    }
    Ok(DistributionRow {
        origin: x,
        t,
        numerators: w.to_big(),
        denominator: Pow::pow(BigUint::from(d), t),
    })
}

/// `P^t(x, x) = hom(C_t) / (N N1^t)`, the same for every vertex.
pub fn return_probability(params: &GraphParams, t: u32) -> Result<ExactProb> {
    ClosedWalkCounter::new(params).return_probability(t)
}

fn require_connected(g: &ExplicitGraph) -> Result<()> {
    if !g.is_connected() {
        return Err(Error::domain(
            "graph is disconnected; the walk has no unique limit",
        ));
    }
    Ok(())
}

fn distance_from_gap(l1: BigUint, n: usize, denom: &BigUint) -> ExactProb {
    ExactProb::new(l1, BigUint::from(2 * n) * denom).expect("positive denominator")
}

/// `Delta_x(t) = 1/2 sum_u |P^t(x,u) - 1/N|`.
pub fn variation_distance(g: &ExplicitGraph, x: usize, t: u32) -> Result<ExactProb> {
    Ok(variation_profile(g, x, t)?.pop().expect("profile covers t"))
}

/// `Delta_x(0), ..., Delta_x(t_max)` in one pass.
pub fn variation_profile(g: &ExplicitGraph, x: usize, t_max: u32) -> Result<Vec<ExactProb>> {
    check_vertex(g, x)?;
    require_connected(g)?;
    let d = BigUint::from(walk_degree(g)?);
    check_budget(g, t_max)?;
    let n = g.vertex_count();
    let mut w = WalkVector::point_mass(g, x);
    let mut denom = BigUint::from(1u32);
    let mut out = Vec::with_capacity(t_max as usize + 1);
    out.push(distance_from_gap(w.l1_gap_to_uniform(&denom), n, &denom));
    for _ in 0..t_max {
        w.step();
        denom *= &d;
        out.push(distance_from_gap(w.l1_gap_to_uniform(&denom), n, &denom));
    }
    Ok(out)
}

/// `(1 - |lambda|/N1)^{-1} ln(N / eps)`, where `|lambda|` is the second largest
/// absolute eigenvalue.
pub fn mixing_time_bound(
    vertex_count: &BigUint,
    degree: &BigUint,
    lambda_abs: &BigUint,
    eps: f64,
) -> Result<f64> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::validation(format!(
            "eps must lie in (0, 1], got {eps}"
        )));
    }
    if lambda_abs >= degree {
        return Err(Error::NoSpectralGap {
            lambda_abs: lambda_abs.to_string(),
            degree: degree.to_string(),
        });
    }
    let ratio = BigRational::new(
        BigInt::from(lambda_abs.clone()),
        BigInt::from(degree.clone()),
    )
    .to_f64()
    .unwrap_or(1.0);
    Ok((ln_big(vertex_count) - eps.ln()) / (1.0 - ratio))
}

/// The mixing bound of `G(n,r,s)` from its closed-form spectrum.
pub fn mixing_time_bound_for(params: &GraphParams, eps: f64) -> Result<f64> {
    let spectrum = full_spectrum(params);
    mixing_time_bound(
        params.vertex_count(),
        params.degree(),
        &spectrum.second_abs_eigenvalue(),
        eps,
    )
}

/// Default truncation horizon for the empirical mixing time: ten times the bound.
pub fn default_mixing_horizon(bound: f64) -> u32 {
    (10.0 * bound).ceil().clamp(1.0, f64::from(u32::MAX)) as u32
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "t", rename_all = "snake_case")]
pub enum MixingOutcome {
    Reached(u32),
    NotReached,
}

/// `eps` as the decimal it prints as, so `0.7` means exactly `7/10` rather than the
/// nearest binary double.
pub fn decimal_rational(eps: f64) -> Option<BigRational> {
    if !eps.is_finite() {
        return None;
    }
    let text = format!("{eps}");
    let (whole, frac) = text.split_once('.').unwrap_or((&text, ""));
    let numer: BigInt = format!("{whole}{frac}").parse().ok()?;
    let denom = Pow::pow(BigInt::from(10u32), frac.len());
    Some(BigRational::new(numer, denom))
}

/// True iff `delta <= eps`, compared exactly against the decimal value of `eps`.
pub fn within(delta: &ExactProb, eps: f64) -> bool {
    match decimal_rational(eps) {
        Some(e) => delta.as_rational() <= &e,
        None => false,
    }
}

/// Smallest `t <= horizon` with `Delta_x(t') <= eps` for every `t'` in `[t, horizon]`.
///
/// The definition asks for all `t' >= t`; the tail beyond `horizon` is not checked.
pub fn empirical_mixing_time(
    g: &ExplicitGraph,
    x: usize,
    eps: f64,
    horizon: u32,
) -> Result<MixingOutcome> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::validation(format!(
            "eps must lie in (0, 1], got {eps}"
        )));
    }
    require_connected(g)?;
    if is_bipartite(g) {
        return Err(Error::domain(
            "graph is bipartite; the variation distance does not converge",
        ));
    }
    let profile = variation_profile(g, x, horizon)?;
    let mut first = None;
    for (t, delta) in profile.iter().enumerate().rev() {
        if !within(delta, eps) {
            break;
        }
        first = Some(t as u32);
    }
    Ok(first.map_or(MixingOutcome::NotReached, MixingOutcome::Reached))
}

fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn require_walkable(g: &ExplicitGraph) -> Result<()> {
    if g.vertex_count() == 0 {
        return Err(Error::domain("graph has no vertices"));
    }
    if (0..g.vertex_count()).any(|v| g.degree(v) == 0) {
        return Err(Error::domain(
            "graph has an isolated vertex; walks get stuck",
        ));
    }
    Ok(())
}

fn fill_trace(g: &ExplicitGraph, rng: &mut ChaCha8Rng, steps: u32, out: &mut Vec<u32>) {
    out.clear();
    let mut v = rng.random_range(0..g.vertex_count());
    out.push(v as u32);
    for _ in 0..steps {
        let nbrs = g.neighbors(v);
        v = nbrs[rng.random_range(0..nbrs.len())] as usize;
        out.push(v as u32);
    }
}

/// Vertices `X_0..X_steps` of one trial: uniform start, uniform neighbor steps.
pub fn walk_trace(g: &ExplicitGraph, cfg: &WalkConfig, trial: u64) -> Result<Vec<u32>> {
    require_walkable(g)?;
    let mut out = Vec::with_capacity(cfg.steps as usize + 1);
    fill_trace(g, &mut trial_rng(cfg.seed, trial), cfg.steps, &mut out);
    Ok(out)
}

/// All traces of a configuration, in trial order.
pub fn simulate_walk(g: &ExplicitGraph, cfg: &WalkConfig) -> Result<Vec<Vec<u32>>> {
    require_walkable(g)?;
    Ok((0..cfg.trials)
        .into_par_iter()
        .map(|trial| {
            let mut out = Vec::with_capacity(cfg.steps as usize + 1);
            fill_trace(g, &mut trial_rng(cfg.seed, trial), cfg.steps, &mut out);
            out
        })
        .collect())
}

/// Runs every trial and folds `f(trace)` with integer addition.
fn count_trials<const K: usize>(
    g: &ExplicitGraph,
    cfg: &WalkConfig,
    f: impl Fn(&[u32]) -> [u64; K] + Sync,
) -> Result<[u64; K]> {
    require_walkable(g)?;
    Ok((0..cfg.trials)
        .into_par_iter()
        .fold(
            || ([0u64; K], Vec::with_capacity(cfg.steps as usize + 1)),
            |(mut acc, mut buf), trial| {
                fill_trace(g, &mut trial_rng(cfg.seed, trial), cfg.steps, &mut buf);
                for (a, x) in acc.iter_mut().zip(f(&buf)) {
                    *a += x;
                }
                (acc, buf)
            },
        )
        .map(|(acc, _)| acc)
        .reduce(
            || [0u64; K],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        ))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReturnFrequency {
    pub t: u32,
    pub trials: u64,
    pub returns: u64,
    pub estimate: f64,
    pub std_error: f64,
}

/// Fraction of trials with `X_steps = X_0`.
pub fn return_frequency(g: &ExplicitGraph, cfg: &WalkConfig) -> Result<ReturnFrequency> {
    let [returns] = count_trials(g, cfg, |w| [(w[0] == w[w.len() - 1]) as u64])?;
    let p = returns as f64 / cfg.trials as f64;
    Ok(ReturnFrequency {
        t: cfg.steps,
        trials: cfg.trials,
        returns,
        estimate: p,
        std_error: (p * (1.0 - p) / cfg.trials as f64).sqrt(),
    })
}

/// Wilson score interval for `successes` out of `n`, at normal quantile `z`.
pub fn wilson_interval(successes: u64, n: u64, z: f64) -> (f64, f64) {
    let n = n as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
    let half = z / (1.0 + z2 / n) * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Interval {
    pub estimate: f64,
    pub low: f64,
    pub high: f64,
}

impl Interval {
    pub fn covers(&self, x: f64) -> bool {
        self.low <= x && x <= self.high
    }
}

/// Rejection-sampling estimate of `P(X_i = X_j for some i < j < t | X_t = X_0)`.
/// `interval` is `None` when no trial returned, which is not an estimate of zero.
#[derive(Clone, Debug, PartialEq)]
pub struct SelfIntersectionEstimate {
    pub t: u32,
    pub trials: u64,
    pub seed: u64,
    pub accepted: u64,
    pub self_intersecting: u64,
    pub z: f64,
    pub interval: Option<Interval>,
}

fn has_repeat(prefix: &[u32], scratch: &mut Vec<u32>) -> bool {
    scratch.clear();
    scratch.extend_from_slice(prefix);
    scratch.sort_unstable();
    scratch.windows(2).any(|w| w[0] == w[1])
}

pub fn conditional_self_intersection(
    g: &ExplicitGraph,
    t: u32,
    cfg: &WalkConfig,
    z: f64,
) -> Result<SelfIntersectionEstimate> {
    if t < 3 {
        return Err(Error::domain(format!(
            "self-intersection needs t >= 3, got {t}"
        )));
    }
    let cfg = WalkConfig { steps: t, ..*cfg };
    let t_us = t as usize;
    let [accepted, hits] = count_trials(g, &cfg, |w| {
        if w[0] != w[t_us] {
            return [0, 0];
        }
        let mut scratch = Vec::with_capacity(t_us);
        [1, has_repeat(&w[..t_us], &mut scratch) as u64]
    })?;
    let interval = (accepted > 0).then(|| {
        let (low, high) = wilson_interval(hits, accepted, z);
        Interval {
            estimate: hits as f64 / accepted as f64,
            low,
            high,
        }
    });
    Ok(SelfIntersectionEstimate {
        t,
        trials: cfg.trials,
        seed: cfg.seed,
        accepted,
        self_intersecting: hits,
        z,
        interval,
    })
}

impl SelfIntersectionEstimate {
    /// `{n, r, s, t, trials, seed, prng, accepted, self_intersecting, estimate,
    /// ci_low, ci_high}`; the last three are null without acceptances.
    pub fn to_json(&self, params: Option<&GraphParams>) -> serde_json::Value {
        #[derive(Serialize)]
        struct Row<'a> {
            n: Option<u32>,
            r: Option<u32>,
            s: Option<u32>,
            t: u32,
            trials: u64,
            seed: u64,
            prng: &'a str,
            accepted: u64,
            self_intersecting: u64,
            estimate: Option<f64>,
            ci_low: Option<f64>,
            ci_high: Option<f64>,
            z: f64,
        }
        let iv = self.interval.as_ref();
        serde_json::to_value(Row {
            n: params.map(GraphParams::n),
            r: params.map(GraphParams::r),
            s: params.map(GraphParams::s),
            t: self.t,
            trials: self.trials,
            seed: self.seed,
            prng: PRNG_ID,
            accepted: self.accepted,
            self_intersecting: self.self_intersecting,
            estimate: iv.map(|i| i.estimate),
            ci_low: iv.map(|i| i.low),
            ci_high: iv.map(|i| i.high),
            z: self.z,
        })
        .expect("plain row serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::gap_ratio;
    use crate::counting::MonoOptions;
    use crate::graph::{build_graph, DEFAULT_MAX_VERTICES};
    use proptest::prelude::*;

    fn params(n: u32, r: u32, s: u32) -> GraphParams {
        GraphParams::new(n, r, s).unwrap()
    }

    fn graph(n: u32, r: u32, s: u32) -> ExplicitGraph {
        build_graph(&params(n, r, s), DEFAULT_MAX_VERTICES).unwrap()
    }

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn petersen_rows() {
        let g = graph(5, 2, 0);
        let row = transition_row(&g, 4, 0).unwrap();
        assert!(row.prob(4).as_rational() == &q(1, 1));
        assert!((0..10).filter(|&u| u != 4).all(|u| row.prob(u).is_zero()));
        assert_eq!(
            transition_row(&g, 4, 2).unwrap().prob(4).as_rational(),
            &q(1, 3)
        );
        assert!(transition_row(&g, 4, 3).unwrap().prob(4).is_zero());
        for t in 0..12 {
            assert!(transition_row(&g, 0, t).unwrap().sums_to_one());
        }
        assert!(matches!(transition_row(&g, 10, 1), Err(Error::Range(_))));
    }

    #[test]
    fn petersen_return_probabilities() {
        let p = params(5, 2, 0);
        assert_eq!(return_probability(&p, 2).unwrap().as_rational(), &q(1, 3));
        assert_eq!(return_probability(&p, 6).unwrap().as_rational(), &q(11, 81));
        assert!(return_probability(&p, 3).unwrap().is_zero());
        assert_eq!(return_probability(&p, 4).unwrap().as_rational(), &q(5, 27));
    }

    #[test]
    fn diagonal_matches_return_probability() {
        for p in GraphParams::all_up_to(500) {
            if p.is_edgeless() {
                continue;
            }
            let g = build_graph(&p, 500).unwrap();
            let w = {
                let mut w = WalkVector::point_mass(&g, 0);
                let mut diag = Vec::new();
                let mut den = BigUint::from(1u32);
                for _ in 1..=30 {
                    w.step();
                    den *= p.degree();
                    diag.push(ExactProb::new(w.to_big().swap_remove(0), den.clone()).unwrap());
                }
                diag
            };
            for (t, d) in (1..=30).zip(w) {
                assert_eq!(return_probability(&p, t).unwrap(), d, "{p} t={t}");
            }
        }
    }

    #[test]
    fn variation_distance_examples() {
        let g = graph(5, 2, 0);
        assert_eq!(
            variation_distance(&g, 0, 0).unwrap().as_rational(),
            &q(9, 10)
        );
        assert_eq!(
            variation_distance(&g, 0, 1).unwrap().as_rational(),
            &q(7, 10)
        );
        assert!(variation_distance(&g, 0, 50).unwrap().to_f64() <= 1e-6);
        let g = graph(7, 3, 1);
        assert_eq!(
            variation_distance(&g, 3, 0).unwrap().as_rational(),
            &q(34, 35)
        );
        assert!(matches!(
            variation_distance(&graph(4, 2, 0), 0, 1),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn variation_distance_against_float_power_iteration() {
        let g = graph(6, 2, 1);
        let n = g.vertex_count();
        let d = g.degree(0) as f64;
        let mut v = vec![0.0f64; n];
        v[2] = 1.0;
        let profile = variation_profile(&g, 2, 25).unwrap();
        for delta in profile.iter().skip(1) {
            let next: Vec<f64> = (0..n)
                .map(|u| g.neighbors(u).iter().map(|&w| v[w as usize]).sum::<f64>() / d)
                .collect();
            v = next;
            let direct: f64 = v.iter().map(|p| (p - 1.0 / n as f64).abs()).sum::<f64>() / 2.0;
            assert!((direct - delta.to_f64()).abs() < 1e-12);
        }
    }

    #[test]
    fn mixing_bound_examples() {
        let p = params(5, 2, 0);
        let b = mixing_time_bound_for(&p, 0.01).unwrap();
        assert!((b - 3.0 * 1000f64.ln()).abs() < 1e-9);
        assert!((b - 20.723).abs() < 1e-3);
        let one = mixing_time_bound_for(&p, 1.0).unwrap();
        assert!((one - 3.0 * 10f64.ln()).abs() < 1e-9);
        let n = BigUint::from(10u32);
        let d = BigUint::from(3u32);
        assert!(matches!(
            mixing_time_bound(&n, &d, &d, 0.1),
            Err(Error::NoSpectralGap { .. })
        ));
        assert!(mixing_time_bound(&n, &d, &BigUint::from(2u32), 0.0).is_err());
        assert!(matches!(
            mixing_time_bound_for(&params(4, 2, 0), 0.1),
            Err(Error::NoSpectralGap { .. })
        ));
    }

    #[test]
    fn empirical_mixing_examples() {
        let g = graph(5, 2, 0);
        match empirical_mixing_time(&g, 0, 0.01, 100).unwrap() {
            MixingOutcome::Reached(t) => assert!(t <= 21),
            other => panic!("{other:?}"),
        }
        assert_eq!(
            empirical_mixing_time(&g, 0, 0.7, 100).unwrap(),
            MixingOutcome::Reached(1)
        );
        assert_eq!(
            empirical_mixing_time(&g, 0, 1.0, 100).unwrap(),
            MixingOutcome::Reached(0)
        );
        assert_eq!(
            empirical_mixing_time(&g, 0, 1e-9, 3).unwrap(),
            MixingOutcome::NotReached
        );
        // K_{3,3} complement structure: G(4,2,1) is the octahedron, not bipartite.
        assert!(empirical_mixing_time(&graph(4, 2, 1), 0, 0.1, 50).is_ok());
        // Matching graph: bipartite and disconnected.
        assert!(matches!(
            empirical_mixing_time(&graph(4, 2, 0), 0, 0.1, 10),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn bipartite_connected_rejected() {
        // A 6-cycle.
        let g = ExplicitGraph::from_adjacency(
            (0..6u32).map(|v| vec![(v + 1) % 6, (v + 5) % 6]).collect(),
        )
        .unwrap();
        assert!(matches!(
            empirical_mixing_time(&g, 0, 0.1, 10),
            Err(Error::Domain(_))
        ));
        assert!(variation_distance(&g, 0, 3).is_ok());
    }

    #[test]
    fn traces_are_reproducible_walks() {
        let g = graph(5, 2, 0);
        let cfg = WalkConfig::new(20, 50, 1).unwrap();
        let a = simulate_walk(&g, &cfg).unwrap();
        let b = simulate_walk(&g, &cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a[7], walk_trace(&g, &cfg, 7).unwrap());
        for w in &a {
            assert_eq!(w.len(), 21);
            assert!(w
                .windows(2)
                .all(|e| g.is_adjacent(e[0] as usize, e[1] as usize)));
        }
        let other = simulate_walk(&g, &WalkConfig { seed: 2, ..cfg }).unwrap();
        assert_ne!(a, other);
        assert!(WalkConfig::new(0, 1, 1).is_err());
        assert!(WalkConfig::new(1, 0, 1).is_err());
    }

    #[test]
    fn traces_independent_of_thread_count() {
        let g = graph(6, 3, 1);
        let cfg = WalkConfig::new(8, 5000, 99).unwrap();
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| {
                    (
                        return_frequency(&g, &cfg).unwrap(),
                        conditional_self_intersection(&g, 6, &cfg, DEFAULT_CI_Z).unwrap(),
                    )
                })
        };
        assert_eq!(run(1), run(4));
    }

    #[test]
    fn return_frequency_near_exact() {
        let g = graph(5, 2, 0);
        let cfg = WalkConfig::new(2, 1_000_000, 1).unwrap();
        let f = return_frequency(&g, &cfg).unwrap();
        assert!((f.estimate - 1.0 / 3.0).abs() <= 3.0 * f.std_error, "{f:?}");
        let f3 = return_frequency(&g, &WalkConfig::new(3, 100_000, 1).unwrap()).unwrap();
        assert_eq!(f3.returns, 0);
    }

    #[test]
    fn self_intersection_examples() {
        let g = graph(5, 2, 0);
        let cfg = WalkConfig::new(1, 200_000, 3).unwrap();
        let five = conditional_self_intersection(&g, 5, &cfg, DEFAULT_CI_Z).unwrap();
        assert!(five.accepted > 0);
        assert_eq!(five.self_intersecting, 0);
        let six = conditional_self_intersection(&g, 6, &cfg, DEFAULT_CI_Z).unwrap();
        assert!(
            six.interval.as_ref().unwrap().covers(29.0 / 33.0),
            "{six:?}"
        );
        let three = conditional_self_intersection(&g, 3, &cfg, DEFAULT_CI_Z).unwrap();
        assert_eq!(three.accepted, 0);
        assert!(three.interval.is_none());
        assert!(three.to_json(None)["estimate"].is_null());
        assert!(conditional_self_intersection(&g, 2, &cfg, DEFAULT_CI_Z).is_err());
    }

    #[test]
    fn self_intersection_covers_exact_gap() {
        let cfg = WalkConfig::new(1, 100_000, 11).unwrap();
        for (n, r, s) in [(5, 2, 1), (6, 2, 1), (6, 3, 1), (7, 3, 2)] {
            let g = graph(n, r, s);
            for t in [4, 5, 6] {
                let exact = gap_ratio(&g, t, &MonoOptions::default()).unwrap().to_f64();
                let est = conditional_self_intersection(&g, t, &cfg, DEFAULT_CI_Z).unwrap();
                let iv = est.interval.expect("returns occur");
                assert!(iv.covers(exact), "G({n},{r},{s}) t={t}: {iv:?} vs {exact}");
            }
        }
    }

    #[test]
    fn decimal_thresholds() {
        assert_eq!(decimal_rational(0.7).unwrap(), q(7, 10));
        assert_eq!(decimal_rational(1.0).unwrap(), q(1, 1));
        assert_eq!(decimal_rational(1e-9).unwrap(), q(1, 1_000_000_000));
        assert_eq!(decimal_rational(-0.25).unwrap(), q(-1, 4));
        assert!(decimal_rational(f64::NAN).is_none());
        let seven_tenths = ExactProb::new(BigUint::from(7u32), BigUint::from(10u32)).unwrap();
        assert!(within(&seven_tenths, 0.7));
        assert!(!within(&seven_tenths, 0.6999));
    }

    #[test]
    fn wilson_interval_shape() {
        let (lo, hi) = wilson_interval(0, 10, 2.0);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.0 && hi < 1.0);
        let (lo, hi) = wilson_interval(50, 100, 1.96);
        assert!(lo < 0.5 && hi > 0.5 && (0.5 - lo - (hi - 0.5)).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn rows_sum_to_one(n in 4u32..9, r in 1u32..4, s in 0u32..3, t in 0u32..15, x in 0usize..20) {
            prop_assume!(s < r && r < n);
            let p = params(n, r, s);
            prop_assume!(!p.is_edgeless());
            let g = build_graph(&p, 500).unwrap();
            let x = x % g.vertex_count();
            let row = transition_row(&g, x, t).unwrap();
            prop_assert!(row.sums_to_one());
            if t > 0 {
                prop_assert_eq!(row.prob(x), return_probability(&p, t).unwrap());
            }
        }
    }
}
