//! Cycle homomorphism and monomorphism counts.
//!
//! `hom(C_t)` is the number of closed `t`-walks, i.e. `tr(A^t) = sum_j m_j lambda_j^t`.
//! `mono(C_t)` counts closed walks whose first `t` vertices are distinct; on a
//! vertex-transitive graph it is `N` times the count rooted at any single vertex.
//! `(hom - mono) / hom` is the probability that a walk conditioned to return at
//! time `t` revisits some vertex before then.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, ToPrimitive, Zero};
use rayon::prelude::*;
use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{bfs_distances, ExplicitGraph, GraphParams};
use crate::spectrum::full_spectrum;

/// Default longest cycle accepted by monomorphism enumeration.
pub const DEFAULT_HORIZON: u32 = 14;

/// An exact probability, kept in lowest terms.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactProb(BigRational);

impl ExactProb {
    pub fn new(numer: BigUint, denom: BigUint) -> Result<Self> {
        if denom.is_zero() {
            return Err(Error::UndefinedRatio(format!("{numer}/0")));
        }
        Ok(ExactProb(BigRational::new(numer.into(), denom.into())))
    }

    pub fn zero() -> Self {
        ExactProb(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactProb(BigRational::one())
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for ExactProb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for ExactProb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn require_positive_length(t: u32) -> Result<()> {
    if t == 0 {
        return Err(Error::domain("cycle length t must be at least 1"));
    }
    Ok(())
}

/// Spectral closed-walk counter: keeps the nonzero-multiplicity spectrum so that
/// many lengths can be evaluated without recomputing binomials.
#[derive(Clone, Debug)]
pub struct ClosedWalkCounter {
    params: GraphParams,
    terms: Vec<(BigInt, BigInt)>,
}

impl ClosedWalkCounter {
    pub fn new(params: &GraphParams) -> Self {
        let terms = full_spectrum(params)
            .entries
            .into_iter()
            .filter(|e| !e.mult.is_zero() && !e.lambda.is_zero())
            .map(|e| (BigInt::from(e.mult), e.lambda))
            .collect();
        ClosedWalkCounter {
            params: params.clone(),
            terms,
        }
    }

    pub fn params(&self) -> &GraphParams {
        &self.params
    }

    /// `hom(C_t) = sum_j m_j lambda_j^t`.
    pub fn hom(&self, t: u32) -> Result<BigUint> {
        require_positive_length(t)?;
        let total: BigInt = self
            .terms
            .iter()
            .map(|(m, lambda)| m * Pow::pow(lambda, t))
            .sum();
        total.to_biguint().ok_or_else(|| {
            Error::Consistency(format!(
                "{}: negative closed-walk count {total}",
                self.params
            ))
        })
    }

    /// `P^t(x, x) = hom(C_t) / (N * N1^t)`.
    pub fn return_probability(&self, t: u32) -> Result<ExactProb> {
        if self.params.is_edgeless() {
            return Err(Error::domain(format!(
                "{} has no edges; walks are undefined",
                self.params
            )));
        }
        let den = self.params.vertex_count() * Pow::pow(self.params.degree(), t);
        ExactProb::new(self.hom(t)?, den)
    }
}

/// Exact `hom(C_t, G(n,r,s))` from the closed-form spectrum.
pub fn hom_cycles(params: &GraphParams, t: u32) -> Result<BigUint> {
    ClosedWalkCounter::new(params).hom(t)
}

/// Walk-count vector `c_k = e_x A^k`, kept in `u128` until the next step could
/// overflow and in big integers afterwards.
pub(crate) struct WalkVector<'g> {
    g: &'g ExplicitGraph,
    counts: Counts,
    scratch: Counts,
    max_degree: u128,
}

enum Counts {
    Small(Vec<u128>),
    Big(Vec<BigUint>),
}

impl<'g> WalkVector<'g> {
    pub(crate) fn point_mass(g: &'g ExplicitGraph, x: usize) -> Self {
        let n = g.vertex_count();
        let mut counts = vec![0u128; n];
        counts[x] = 1;
        let max_degree = (0..n).map(|v| g.degree(v)).max().unwrap_or(0) as u128;
        WalkVector {
            g,
            counts: Counts::Small(counts),
            scratch: Counts::Small(vec![0; n]),
            max_degree,
        }
    }

    pub(crate) fn step(&mut self) {
        if let Counts::Small(c) = &self.counts {
            let max = c.iter().copied().max().unwrap_or(0);
            if max.checked_mul(self.max_degree.max(1)).is_none() {
                self.promote();
            }
        }
        let g = self.g;
        match (&self.counts, &mut self.scratch) {
            (Counts::Small(cur), Counts::Small(next)) => {
                for (u, slot) in next.iter_mut().enumerate() {
                    *slot = g.neighbors(u).iter().map(|&v| cur[v as usize]).sum();
                }
            }
            (Counts::Big(cur), Counts::Big(next)) => {
                for (u, slot) in next.iter_mut().enumerate() {
                    slot.set_zero();
                    for &v in g.neighbors(u) {
                        *slot += &cur[v as usize];
                    }
                }
            }
            _ => unreachable!("buffers promoted together"),
        }
        std::mem::swap(&mut self.counts, &mut self.scratch);
    }

    fn promote(&mut self) {
        let up = |c: &Counts| match c {
            Counts::Small(v) => Counts::Big(v.iter().map(|&x| BigUint::from(x)).collect()),
            Counts::Big(v) => Counts::Big(v.clone()),
        };
        self.counts = up(&self.counts);
        self.scratch = up(&self.scratch);
    }

    /// Sum of entries over the neighbors of `x`: one more step, read at `x`.
    pub(crate) fn neighbor_sum(&self, x: usize) -> BigUint {
        match &self.counts {
            Counts::Small(c) => {
                let mut acc = BigUint::zero();
                let mut small: u128 = 0;
                for &v in self.g.neighbors(x) {
                    match small.checked_add(c[v as usize]) {
                        Some(s) => small = s,
                        None => {
                            acc += small;
                            small = c[v as usize];
                        }
                    }
                }
                acc + small
            }
            Counts::Big(c) => self.g.neighbors(x).iter().map(|&v| &c[v as usize]).sum(),
        }
    }

    pub(crate) fn to_big(&self) -> Vec<BigUint> {
        match &self.counts {
            Counts::Small(c) => c.iter().map(|&x| BigUint::from(x)).collect(),
            Counts::Big(c) => c.clone(),
        }
    }

    /// `sum_u |N c_u - D|` for the current step with total mass `D`.
    pub(crate) fn l1_gap_to_uniform(&self, denom: &BigUint) -> BigUint {
        let n = self.g.vertex_count();
        if let (Counts::Small(c), Some(d)) = (&self.counts, denom.to_u128()) {
            let fits = c
                .iter()
                .copied()
                .max()
                .and_then(|m| m.checked_mul(n as u128))
                .is_some();
            if fits {
                let mut acc = BigUint::zero();
                for &x in c {
                    acc += (x * n as u128).abs_diff(d);
                }
                return acc;
            }
        }
        let d = BigInt::from(denom.clone());
        let nn = BigInt::from(n);
        let mut acc = BigUint::zero();
        for x in self.to_big() {
            let diff = &nn * BigInt::from(x) - &d;
            acc += diff.magnitude();
        }
        acc
    }
}

/// `tr(A^t)` by repeated sparse products from basis vectors.
///
/// Vertex-transitive graphs use a single root and scale by `N`; other graphs sum
/// the diagonal over all roots.
pub fn hom_trace_oracle(g: &ExplicitGraph, t: u32) -> Result<BigUint> {
    require_positive_length(t)?;
    let n = g.vertex_count();
    if n == 0 {
        return Ok(BigUint::zero());
    }
    let closed_from = |x: usize| {
        let mut w = WalkVector::point_mass(g, x);
        for _ in 1..t {
            w.step();
        }
        w.neighbor_sum(x)
    };
    if g.is_vertex_transitive() {
        Ok(closed_from(0) * n)
    } else {
        Ok((0..n).map(closed_from).sum())
    }
}

/// How closed self-avoiding walks are enumerated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MonoStrategy {
    /// Whichever strategy has the lower estimated cost.
    Auto,
    /// Depth-first search with a visited bitset and distance pruning.
    Backtrack,
    /// Joins pairs of half-length paths with disjoint interiors.
    MeetInMiddle,
}

#[derive(Clone, Copy, Debug)]
pub struct MonoOptions {
    pub horizon: u32,
    pub strategy: MonoStrategy,
    /// Count from one root and multiply by `N` on vertex-transitive graphs.
    pub use_transitivity: bool,
}

impl Default for MonoOptions {
    fn default() -> Self {
        MonoOptions {
            horizon: DEFAULT_HORIZON,
            strategy: MonoStrategy::Auto,
            use_transitivity: true,
        }
    }
}

/// Largest half-path interior the meet-in-the-middle join supports.
const MAX_HALF_INTERIOR: usize = 8;

fn max_degree(g: &ExplicitGraph) -> f64 {
    (0..g.vertex_count())
        .map(|v| g.degree(v))
        .max()
        .unwrap_or(0) as f64
}

fn meet_in_middle_supported(t: u32) -> bool {
    (t as usize).div_ceil(2) <= MAX_HALF_INTERIOR + 1
}

/// Rough per-root work of one strategy at max degree `d`.
fn rooted_cost(d: f64, t: u32, strategy: MonoStrategy) -> f64 {
    match strategy {
        MonoStrategy::MeetInMiddle => {
            let long = t.div_ceil(2) as i32;
            d.powi(long) * 2f64.powi(long - 1)
        }
        _ => d.powi(t as i32 - 1),
    }
}

fn resolve_strategy(d: f64, t: u32, requested: MonoStrategy) -> MonoStrategy {
    match requested {
        MonoStrategy::Auto
            if meet_in_middle_supported(t)
                && rooted_cost(d, t, MonoStrategy::MeetInMiddle)
                    < rooted_cost(d, t, MonoStrategy::Backtrack) =>
        {
            MonoStrategy::MeetInMiddle
        }
        MonoStrategy::Auto => MonoStrategy::Backtrack,
        s => s,
    }
}

/// Rough work estimate for counting `mono(C_t)` with `opts`: roots enumerated
/// times the per-root cost of the strategy that would run.
pub fn mono_cost_estimate(g: &ExplicitGraph, t: u32, opts: &MonoOptions) -> f64 {
    let d = max_degree(g);
    let roots = if opts.use_transitivity && g.is_vertex_transitive() {
        1.0
    } else {
        g.vertex_count() as f64
    };
    roots * rooted_cost(d, t, resolve_strategy(d, t, opts.strategy))
}

/// Exact number of injective homomorphisms `C_t -> g`.
pub fn mono_cycles(g: &ExplicitGraph, t: u32) -> Result<BigUint> {
    mono_cycles_with(g, t, &MonoOptions::default())
}

pub fn mono_cycles_with(g: &ExplicitGraph, t: u32, opts: &MonoOptions) -> Result<BigUint> {
    if t < 3 {
        return Err(Error::domain(format!(
            "monomorphisms of C_t need t >= 3, got {t}"
        )));
    }
    if t > opts.horizon {
        return Err(Error::Feasibility {
            message: format!(
                "cycle length {t} beyond enumeration horizon {}",
                opts.horizon
            ),
            estimated_cost: mono_cost_estimate(g, t, opts),
        });
    }
    let n = g.vertex_count();
    if n == 0 {
        return Ok(BigUint::zero());
    }
    let strategy = resolve_strategy(max_degree(g), t, opts.strategy);
    if strategy == MonoStrategy::MeetInMiddle && !meet_in_middle_supported(t) {
        return Err(Error::Feasibility {
            message: format!(
                "meet-in-the-middle supports t <= {}",
                2 * MAX_HALF_INTERIOR + 2
            ),
            estimated_cost: mono_cost_estimate(g, t, opts),
        });
    }
    let rooted = |root: usize| -> u128 {
        match strategy {
            MonoStrategy::MeetInMiddle => rooted_meet_in_middle(g, root, t as usize),
            _ => rooted_backtrack(g, root, t as usize),
        }
    };
    if opts.use_transitivity && g.is_vertex_transitive() {
        Ok(BigUint::from(rooted(0)) * n)
    } else {
        Ok((0..n).map(|x| BigUint::from(rooted(x))).sum())
    }
}

fn bit(set: &[u64], v: usize) -> bool {
    set[v / 64] >> (v % 64) & 1 == 1
}

fn flip(set: &mut [u64], v: usize) {
    set[v / 64] ^= 1 << (v % 64);
}

struct Backtrack<'g> {
    g: &'g ExplicitGraph,
    t: usize,
    dist: &'g [u32],
    root_nbrs: &'g [u64],
    visited: Vec<u64>,
}

impl Backtrack<'_> {
    /// Closed self-avoiding completions with `cur` at walk position `depth`.
    fn count(&mut self, cur: usize, depth: usize) -> u128 {
        if depth + 2 == self.t {
            return self
                .g
                .neighbors(cur)
                .iter()
                .filter(|&&y| bit(self.root_nbrs, y as usize) && !bit(&self.visited, y as usize))
                .count() as u128;
        }
        let remaining = (self.t - depth - 1) as u32;
        let mut total = 0;
        for &y in self.g.neighbors(cur) {
            let y = y as usize;
            if bit(&self.visited, y) || self.dist[y] > remaining {
                continue;
            }
            flip(&mut self.visited, y);
            total += self.count(y, depth + 1);
            flip(&mut self.visited, y);
        }
        total
    }
}

/// Closed self-avoiding `t`-walks starting at `root`; parallel over the first step.
fn rooted_backtrack(g: &ExplicitGraph, root: usize, t: usize) -> u128 {
    let words = g.vertex_count().div_ceil(64);
    let dist = bfs_distances(g, root);
    let mut root_nbrs = vec![0u64; words];
    for &y in g.neighbors(root) {
        flip(&mut root_nbrs, y as usize);
    }
    let mut base = vec![0u64; words];
    flip(&mut base, root);
    if t == 3 {
        let mut b = Backtrack {
            g,
            t,
            dist: &dist,
            root_nbrs: &root_nbrs,
            visited: base,
        };
        return b.count(root, 0);
    }
    g.neighbors(root)
        .par_iter()
        .map(|&x1| {
            let mut visited = base.clone();
            flip(&mut visited, x1 as usize);
            let mut b = Backtrack {
                g,
                t,
                dist: &dist,
                root_nbrs: &root_nbrs,
                visited,
            };
            b.count(x1 as usize, 1)
        })
        .sum()
}

type Interior = [u32; MAX_HALF_INTERIOR];
const PAD: u32 = u32::MAX;

/// Self-avoiding paths of `len` steps from `root`, as `(endpoint, sorted interior)`.
fn half_paths(g: &ExplicitGraph, root: usize, len: usize, max_dist: u32) -> Vec<(u32, Interior)> {
    fn go(
        g: &ExplicitGraph,
        path: &mut Vec<u32>,
        visited: &mut [u64],
        len: usize,
        dist: &[u32],
        max_dist: u32,
        out: &mut Vec<(u32, Interior)>,
    ) {
        let cur = *path.last().expect("path starts at root") as usize;
        if path.len() == len + 1 {
            if dist[cur] <= max_dist {
                let mut key = [PAD; MAX_HALF_INTERIOR];
                let interior = &path[1..len];
                key[..interior.len()].copy_from_slice(interior);
                key[..interior.len()].sort_unstable();
                out.push((cur as u32, key));
            }
            return;
        }
        let left = (len + 1 - path.len()) as u32;
        for &y in g.neighbors(cur) {
            // The endpoint must come back within max_dist more steps.
            if bit(visited, y as usize) || dist[y as usize] > max_dist + left - 1 {
                continue;
            }
            flip(visited, y as usize);
            path.push(y);
            go(g, path, visited, len, dist, max_dist, out);
            path.pop();
            flip(visited, y as usize);
        }
    }
    let dist = bfs_distances(g, root);
    let mut visited = vec![0u64; g.vertex_count().div_ceil(64)];
    flip(&mut visited, root);
    let mut out = Vec::new();
    let mut path = vec![root as u32];
    go(g, &mut path, &mut visited, len, &dist, max_dist, &mut out);
    out.sort_unstable();
    out
}

/// Run-length aggregate of a sorted path list into `(endpoint, interior, count)`.
fn aggregate(paths: &[(u32, Interior)]) -> Vec<(u32, Interior, u64)> {
    let mut out: Vec<(u32, Interior, u64)> = Vec::new();
    for &(v, key) in paths {
        match out.last_mut() {
            Some((lv, lk, c)) if *lv == v && *lk == key => *c += 1,
            _ => out.push((v, key, 1)),
        }
    }
    out
}

fn for_each_subset(key: &Interior, mut f: impl FnMut(Interior, bool)) {
    let k = key.iter().take_while(|&&x| x != PAD).count();
    for mask in 0u32..(1 << k) {
        let mut sub = [PAD; MAX_HALF_INTERIOR];
        let mut w = 0;
        for (i, &x) in key[..k].iter().enumerate() {
            if mask >> i & 1 == 1 {
                sub[w] = x;
                w += 1;
            }
        }
        f(sub, w % 2 == 1);
    }
}

/// Closed self-avoiding `t`-walks at `root` as pairs of half paths ending at the
/// same vertex whose interiors are disjoint. Disjoint pairs are counted by
/// inclusion-exclusion over common interior subsets.
fn rooted_meet_in_middle(g: &ExplicitGraph, root: usize, t: usize) -> u128 {
    let short = t / 2;
    let long = t - short;
    let a = aggregate(&half_paths(g, root, short, long as u32));
    let b = if long == short {
        a.clone()
    } else {
        aggregate(&half_paths(g, root, long, short as u32))
    };
    let by_endpoint = |list: &[(u32, Interior, u64)]| {
        let mut groups: FxHashMap<u32, (usize, usize)> = FxHashMap::default();
        let mut start = 0;
        while start < list.len() {
            let v = list[start].0;
            let end = start + list[start..].iter().take_while(|e| e.0 == v).count();
            groups.insert(v, (start, end));
            start = end;
        }
        groups
    };
    let groups_a = by_endpoint(&a);
    let groups_b = by_endpoint(&b);
    let mut endpoints: Vec<u32> = groups_a.keys().copied().collect();
    endpoints.sort_unstable();
    endpoints
        .par_iter()
        .map(|v| {
            let Some(&(bs, be)) = groups_b.get(v) else {
                return 0i128;
            };
            let (as_, ae) = groups_a[v];
            let mut superset_counts: FxHashMap<Interior, u64> = FxHashMap::default();
            for &(_, key, c) in &a[as_..ae] {
                for_each_subset(&key, |sub, _| *superset_counts.entry(sub).or_default() += c);
            }
            let mut total: i128 = 0;
            for &(_, key, c) in &b[bs..be] {
                let mut inner: i128 = 0;
                for_each_subset(&key, |sub, odd| {
                    if let Some(&f) = superset_counts.get(&sub) {
                        if odd {
                            inner -= f as i128;
                        } else {
                            inner += f as i128;
                        }
                    }
                });
                total += inner * c as i128;
            }
            total
        })
        .sum::<i128>()
        .try_into()
        .expect("disjoint pair count is nonnegative")
}

/// Number of `t`-cycle subgraphs, `mono(C_t) / (2t)`.
pub fn cycle_copies(g: &ExplicitGraph, t: u32, opts: &MonoOptions) -> Result<BigUint> {
    let mono = mono_cycles_with(g, t, opts)?;
    let (q, rem) = mono.div_rem(&BigUint::from(2 * t));
    if !rem.is_zero() {
        return Err(Error::Consistency(format!(
            "mono(C_{t}) = {mono} is not divisible by {}",
            2 * t
        )));
    }
    Ok(q)
}

fn hom_for_graph(g: &ExplicitGraph, t: u32) -> Result<BigUint> {
    match g.params() {
        Some(p) => hom_cycles(p, t),
        None => hom_trace_oracle(g, t),
    }
}

/// `(hom - mono) / hom`: the chance a walk returning at time `t` meets itself earlier.
pub fn gap_ratio(g: &ExplicitGraph, t: u32, opts: &MonoOptions) -> Result<ExactProb> {
    let hom = hom_for_graph(g, t)?;
    if hom.is_zero() {
        return Err(Error::UndefinedRatio(format!("hom(C_{t}) = 0")));
    }
    let mono = mono_cycles_with(g, t, opts)?;
    gap_from_counts(&hom, &mono)
}

fn gap_from_counts(hom: &BigUint, mono: &BigUint) -> Result<ExactProb> {
    if mono > hom {
        return Err(Error::Consistency(format!("mono {mono} exceeds hom {hom}")));
    }
    ExactProb::new(hom - mono, hom.clone())
}

/// Union bound on the gap ratio: `t * sum_{k=2}^{t-2} P^k(x,x) P^{t-k}(x,x) / P^t(x,x)`.
///
/// The `k = 1` and `k = t-1` terms vanish because `P^1(x,x) = 0`. Values above 1 are
/// returned unchanged.
pub fn gap_upper_bound(params: &GraphParams, t: u32) -> Result<BigRational> {
    if t < 4 {
        return Err(Error::domain(format!("union bound needs t >= 4, got {t}")));
    }
    let counter = ClosedWalkCounter::new(params);
    let p_t = counter.return_probability(t)?;
    if p_t.is_zero() {
        return Err(Error::UndefinedRatio(format!("P^{t}(x,x) = 0")));
    }
    let probs: Vec<BigRational> = (0..=t)
        .map(|k| {
            if k < 2 {
                Ok(BigRational::zero())
            } else {
                counter.return_probability(k).map(|p| p.0)
            }
        })
        .collect::<Result<_>>()?;
    let sum: BigRational = (2..=t - 2)
        .map(|k| &probs[k as usize] * &probs[(t - k) as usize])
        .sum();
    Ok(sum * BigRational::from_integer(t.into()) / p_t.0)
}

/// One row of the counts export.
#[derive(Clone, Debug)]
pub struct CycleCounts {
    pub t: u32,
    pub hom: BigUint,
    pub mono: Option<BigUint>,
    pub copies: Option<BigUint>,
    pub gap_ratio: Option<ExactProb>,
    pub gap_upper_bound: Option<BigRational>,
}

impl CycleCounts {
    /// Computes every quantity that is defined and feasible; infeasible or undefined
    /// parts are left empty. Consistency failures are returned as errors.
    pub fn compute(
        params: &GraphParams,
        graph: Option<&ExplicitGraph>,
        t: u32,
        opts: &MonoOptions,
    ) -> Result<Self> {
        let hom = hom_cycles(params, t)?;
        let mut row = CycleCounts {
            t,
            hom,
            mono: None,
            copies: None,
            gap_ratio: None,
            gap_upper_bound: None,
        };
        if let Some(g) = graph {
            if t >= 3 && t <= opts.horizon {
                let mono = mono_cycles_with(g, t, opts)?;
                let (q, rem) = mono.div_rem(&BigUint::from(2 * t));
                if !rem.is_zero() {
                    return Err(Error::Consistency(format!(
                        "mono(C_{t}) = {mono} is not divisible by {}",
                        2 * t
                    )));
                }
                if !row.hom.is_zero() {
                    row.gap_ratio = Some(gap_from_counts(&row.hom, &mono)?);
                }
                row.copies = Some(q);
                row.mono = Some(mono);
            }
        }
        match gap_upper_bound(params, t) {
            Ok(b) => row.gap_upper_bound = Some(b),
            Err(Error::Domain(_) | Error::UndefinedRatio(_)) => {}
            Err(e) => return Err(e),
        }
        Ok(row)
    }

    /// `{n, r, s, t, hom, mono?, copies?, gap_ratio?, gap_upper_bound?}`, big numbers
    /// as decimal strings.
    pub fn to_json(&self, params: &GraphParams) -> serde_json::Value {
        #[derive(Serialize)]
        struct Row {
            n: u32,
            r: u32,
            s: u32,
            t: u32,
            hom: String,
            #[serde(skip_serializing_if = "Option::is_none")]
            mono: Option<String>,
            #[serde(skip_serializing_if = "Option::is_none")]
            copies: Option<String>,
            #[serde(skip_serializing_if = "Option::is_none")]
            gap_ratio: Option<String>,
            #[serde(skip_serializing_if = "Option::is_none")]
            gap_upper_bound: Option<String>,
        }
        serde_json::to_value(Row {
            n: params.n(),
            r: params.r(),
            s: params.s(),
            t: self.t,
            hom: self.hom.to_string(),
            mono: self.mono.as_ref().map(ToString::to_string),
            copies: self.copies.as_ref().map(ToString::to_string),
            gap_ratio: self.gap_ratio.as_ref().map(ToString::to_string),
            gap_upper_bound: self.gap_upper_bound.as_ref().map(ToString::to_string),
        })
        .expect("plain row serializes")
    }
}
