//! Leading-order predictions for `hom(C_t)` and `mono(C_t)`, the regime intervals
//! in `t`, and reports comparing exact counts against them.
//!
//! For `1 <= s`, the boundaries `b_j = ln n / ln((r-j)/(s-j))`, `j in [0, s-1]`,
//! decrease in `j`. With `eps` neighborhoods removed they cut the positive integers
//! into intervals `I_s < I_{s-1} < ... < I_0`; inside `I_j` the `j`-th spectral
//! term of `hom(C_t)` dominates.

use std::fmt;
use std::io::Write;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Pow, ToPrimitive, Zero};
use serde::Serialize;

use crate::combinatorics::{binomial, ln_big};
use crate::counting::{hom_cycles, mono_cost_estimate, mono_cycles_with, ExactProb, MonoOptions};
use crate::error::{Error, Result};
use crate::graph::{ExplicitGraph, GraphParams};
use crate::spectrum::full_spectrum;

pub const DEFAULT_EPS: f64 = 0.1;

/// Default cap on the monomorphism work estimate inside a report.
pub const DEFAULT_ENUMERATION_BUDGET: f64 = 1e8;

/// Closed integer range; `hi = None` means unbounded. Empty when `lo > hi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TRange {
    pub lo: u64,
    pub hi: Option<u64>,
}

impl TRange {
    pub fn is_empty(&self) -> bool {
        self.hi.is_some_and(|h| self.lo > h)
    }

    pub fn contains(&self, t: u64) -> bool {
        t >= self.lo && self.hi.is_none_or(|h| t <= h)
    }

    /// Both neighbors of `t` also lie in the range.
    pub fn strictly_contains(&self, t: u64) -> bool {
        t > self.lo && self.hi.is_none_or(|h| t < h)
    }
}

impl fmt::Display for TRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.hi {
            Some(h) => write!(f, "[{}, {h}]", self.lo),
            None => write!(f, "[{}, inf)", self.lo),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RegimeSpec {
    pub eps: f64,
    /// `b_j` for `j = 0..s`; empty when `s = 0`.
    pub boundaries: Vec<f64>,
    /// `intervals[j]` is `I_j`, `j = 0..=s`.
    pub intervals: Vec<TRange>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Interval(u32),
    /// Inside the `eps` neighborhood of `b_lower`, between `I_{lower+1}` and `I_lower`.
    Gap {
        lower: u32,
    },
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Regime::Interval(j) => write!(f, "{j}"),
            Regime::Gap { .. } => write!(f, "gap"),
        }
    }
}

fn check_eps(eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::validation(format!(
            "eps must lie in (0, 1), got {eps}"
        )));
    }
    Ok(())
}

fn floor_u64(x: f64) -> u64 {
    x.floor().max(0.0) as u64
}

/// Boundaries and intervals `I_s, ..., I_0` for `G(n,r,s)`.
///
/// `I_s = [1, floor((1-eps) b_{s-1})]`, `I_j = [floor((1+eps) b_j) + 1, floor((1-eps) b_{j-1})]`
/// for `0 < j < s`, and `I_0 = [floor((1+eps) b_0), inf)`, moved up by one if it
/// would overlap `I_1`. For `s = 0` the only interval is `I_0 = [1, inf)`.
pub fn interval_boundaries(params: &GraphParams, eps: f64) -> Result<RegimeSpec> {
    check_eps(eps)?;
    let (n, r, s) = (params.n(), params.r(), params.s());
    if s == 0 {
        return Ok(RegimeSpec {
            eps,
            boundaries: Vec::new(),
            intervals: vec![TRange { lo: 1, hi: None }],
        });
    }
    let ln_n = f64::from(n).ln();
    let boundaries: Vec<f64> = (0..s)
        .map(|j| ln_n / (f64::from(r - j) / f64::from(s - j)).ln())
        .collect();
    let su = s as usize;
    let mut intervals = vec![TRange { lo: 0, hi: None }; su + 1];
    intervals[su] = TRange {
        lo: 1,
        hi: Some(floor_u64((1.0 - eps) * boundaries[su - 1])),
    };
    for j in 1..su {
        intervals[j] = TRange {
            lo: floor_u64((1.0 + eps) * boundaries[j]) + 1,
            hi: Some(floor_u64((1.0 - eps) * boundaries[j - 1])),
        };
    }
    let below = intervals[1].hi.expect("finite");
    intervals[0] = TRange {
        lo: floor_u64((1.0 + eps) * boundaries[0]).max(below + 1),
        hi: None,
    };
    Ok(RegimeSpec {
        eps,
        boundaries,
        intervals,
    })
}

impl RegimeSpec {
    pub fn classify(&self, t: u64) -> Result<Regime> {
        if t == 0 {
            return Err(Error::validation("t must be at least 1"));
        }
        if let Some(j) = self.intervals.iter().position(|iv| iv.contains(t)) {
            return Ok(Regime::Interval(j as u32));
        }
        let tf = t as f64;
        let lower = (0..self.boundaries.len())
            .min_by(|&a, &b| {
                (tf - self.boundaries[a])
                    .abs()
                    .total_cmp(&(tf - self.boundaries[b]).abs())
            })
            .expect("s >= 1 whenever gaps exist");
        Ok(Regime::Gap {
            lower: lower as u32,
        })
    }

    /// The regime `j` such that `t` and both its neighbors lie in `I_j`.
    pub fn strictly_inside(&self, t: u64) -> Option<u32> {
        self.intervals
            .iter()
            .position(|iv| iv.strictly_contains(t))
            .map(|j| j as u32)
    }
}

fn require_edges(params: &GraphParams) -> Result<()> {
    if params.is_edgeless() {
        return Err(Error::domain(format!("{params} has no edges")));
    }
    Ok(())
}

fn ln_factorial(j: u32) -> f64 {
    (2..=j).map(|k| f64::from(k).ln()).sum()
}

/// `ln( N1^t (n^j / j!) (C(r-j,s-j) / C(r,s))^t )`.
pub fn regime_term_ln(params: &GraphParams, j: u32, t: u32) -> Result<f64> {
    require_edges(params)?;
    if j > params.s() {
        return Err(Error::range(format!(
            "regime {j} outside [0, {}]",
            params.s()
        )));
    }
    let (n, r, s) = (params.n(), params.r(), params.s());
    let t = f64::from(t);
    let shrink = ln_big(&binomial(u64::from(r - j), i64::from(s - j)))
        - ln_big(&binomial(u64::from(r), i64::from(s)));
    Ok(
        t * ln_big(params.degree()) + f64::from(j) * f64::from(n).ln() - ln_factorial(j)
            + t * shrink,
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RegimePrediction {
    pub regime: Regime,
    /// Natural log of the predicted `hom(C_t)`.
    pub ln_hom: f64,
}

/// Regime of `t` and the dominant-term prediction of `hom(C_t)`, as a logarithm.
/// Inside a gap the larger of the two adjacent terms is used.
pub fn hom_regime_prediction(params: &GraphParams, t: u32, eps: f64) -> Result<RegimePrediction> {
    require_edges(params)?;
    let spec = interval_boundaries(params, eps)?;
    let regime = spec.classify(u64::from(t))?;
    let ln_hom = match regime {
        Regime::Interval(j) => regime_term_ln(params, j, t)?,
        Regime::Gap { lower } => {
            regime_term_ln(params, lower, t)?.max(regime_term_ln(params, lower + 1, t)?)
        }
    };
    Ok(RegimePrediction { regime, ln_hom })
}

/// `ln( N N1 (N1 / C(r,s))^(t-2) )`, the fixed-`t` prediction of `mono(C_t)`.
pub fn mono_fixed_t_prediction_ln(params: &GraphParams, t: u32) -> Result<f64> {
    if t < 3 {
        return Err(Error::domain(format!("prediction needs t >= 3, got {t}")));
    }
    require_edges(params)?;
    let ln_d = ln_big(params.degree());
    let ln_c = ln_big(&binomial(u64::from(params.r()), i64::from(params.s())));
    Ok(ln_big(params.vertex_count()) + ln_d + f64::from(t - 2) * (ln_d - ln_c))
}

pub fn mono_fixed_t_prediction(params: &GraphParams, t: u32) -> Result<f64> {
    mono_fixed_t_prediction_ln(params, t).map(f64::exp)
}

/// Exact terms `m_j (lambda_j / N1)^t` for `j = 0..=r`. They sum to `hom(C_t) / N1^t`.
pub fn hom_expansion_terms(params: &GraphParams, t: u32) -> Result<Vec<BigRational>> {
    require_edges(params)?;
    if t == 0 {
        return Err(Error::domain("t must be at least 1"));
    }
    let denom = BigInt::from(Pow::pow(params.degree(), t));
    Ok(full_spectrum(params)
        .entries
        .into_iter()
        .map(|e| BigRational::new(BigInt::from(e.mult) * Pow::pow(&e.lambda, t), denom.clone()))
        .collect())
}

/// The `j in [0, s]` whose exact term is the unique maximum, if there is one.
pub fn dominant_term(params: &GraphParams, t: u32) -> Result<Option<u32>> {
    let terms = hom_expansion_terms(params, t)?;
    let head = &terms[..=params.s() as usize];
    let best = head.iter().max().expect("j = 0 is always present");
    let mut winners = head.iter().enumerate().filter(|(_, x)| *x == best);
    let (j, _) = winners.next().expect("max exists");
    Ok(winners.next().is_none().then_some(j as u32))
}

#[derive(Clone, Copy, Debug)]
pub struct ReportOptions {
    pub eps: f64,
    pub mono: MonoOptions,
    /// Rows whose monomorphism work estimate exceeds this skip enumeration.
    pub enumeration_budget: f64,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            eps: DEFAULT_EPS,
            mono: MonoOptions::default(),
            enumeration_budget: DEFAULT_ENUMERATION_BUDGET,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RegimeRow {
    pub t: u32,
    pub regime: Regime,
    pub hom: BigUint,
    pub hom_pred_ln: f64,
    /// `ln hom - hom_pred_ln`; absent when `hom = 0`.
    pub ratio_ln: Option<f64>,
    pub mono: Option<BigUint>,
    pub mono_pred_ln: Option<f64>,
    pub gap_ratio: Option<ExactProb>,
    pub flags: Vec<&'static str>,
}

#[derive(Clone, Debug)]
pub struct RegimeReport {
    pub params: GraphParams,
    pub spec: RegimeSpec,
    pub rows: Vec<RegimeRow>,
}

pub const REPORT_CSV_HEADER: &str = "t,regime,hom,hom_pred_log,ratio_log,mono,gap_ratio,flags";

/// Exact counts next to predictions for each `t`. Monomorphisms are enumerated
/// only when `graph` is given and the row is within the horizon and budget; rows
/// with `t >= min(sqrt N, N1)` are flagged `necessity_zone`.
pub fn regime_report(
    params: &GraphParams,
    graph: Option<&ExplicitGraph>,
    t_values: &[u32],
    opts: &ReportOptions,
) -> Result<RegimeReport> {
    require_edges(params)?;
    let spec = interval_boundaries(params, opts.eps)?;
    let as_f64 = |x: &BigUint| x.to_f64().unwrap_or(f64::INFINITY);
    let threshold = as_f64(params.vertex_count())
        .sqrt()
        .min(as_f64(params.degree()));
    let mut rows = Vec::with_capacity(t_values.len());
    for &t in t_values {
        let pred = hom_regime_prediction(params, t, opts.eps)?;
        let hom = hom_cycles(params, t)?;
        let mut flags = Vec::new();
        if matches!(pred.regime, Regime::Gap { .. }) {
            flags.push("gap");
        }
        if f64::from(t) >= threshold {
            flags.push("necessity_zone");
        }
        let ratio_ln = (!hom.is_zero()).then(|| ln_big(&hom) - pred.ln_hom);
        let mut mono = None;
        let mut gap_ratio = None;
        if t >= 3 {
            match graph {
                None => flags.push("mono_skipped"),
                Some(_) if t > opts.mono.horizon => flags.push("beyond_horizon"),
                Some(g) if mono_cost_estimate(g, t, &opts.mono) > opts.enumeration_budget => {
                    flags.push("over_budget")
                }
                Some(g) => {
                    let m = mono_cycles_with(g, t, &opts.mono)?;
                    if !hom.is_zero() {
                        if m > hom {
                            return Err(Error::Consistency(format!(
                                "{params}: mono {m} exceeds hom {hom} at t={t}"
                            )));
                        }
                        gap_ratio = Some(ExactProb::new(&hom - &m, hom.clone())?);
                    }
                    mono = Some(m);
                }
            }
        }
        rows.push(RegimeRow {
            t,
            regime: pred.regime,
            hom,
            hom_pred_ln: pred.ln_hom,
            ratio_ln,
            mono,
            mono_pred_ln: mono_fixed_t_prediction_ln(params, t).ok(),
            gap_ratio,
            flags,
        });
    }
    Ok(RegimeReport {
        params: params.clone(),
        spec,
        rows,
    })
}

fn opt_str<T: ToString>(x: &Option<T>) -> String {
    x.as_ref().map(ToString::to_string).unwrap_or_default()
}

impl RegimeReport {
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "{REPORT_CSV_HEADER}")?;
        for row in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                row.t,
                row.regime,
                row.hom,
                row.hom_pred_ln,
                opt_str(&row.ratio_ln),
                opt_str(&row.mono),
                opt_str(&row.gap_ratio),
                row.flags.join(";")
            )?;
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Row<'a> {
            t: u32,
            regime: String,
            hom: String,
            hom_pred_log: f64,
            ratio_log: Option<f64>,
            mono: Option<String>,
            mono_pred_log: Option<f64>,
            gap_ratio: Option<String>,
            flags: &'a [&'static str],
        }
        #[derive(Serialize)]
        struct Report<'a> {
            n: u32,
            r: u32,
            s: u32,
            eps: f64,
            boundaries: &'a [f64],
            intervals: &'a [TRange],
            rows: Vec<Row<'a>>,
        }
        let rows = self
            .rows
            .iter()
            .map(|row| Row {
                t: row.t,
                regime: row.regime.to_string(),
                hom: row.hom.to_string(),
                hom_pred_log: row.hom_pred_ln,
                ratio_log: row.ratio_ln,
                mono: row.mono.as_ref().map(ToString::to_string),
                mono_pred_log: row.mono_pred_ln,
                gap_ratio: row.gap_ratio.as_ref().map(ToString::to_string),
                flags: &row.flags,
            })
            .collect();
        serde_json::to_value(Report {
            n: self.params.n(),
            r: self.params.r(),
            s: self.params.s(),
            eps: self.spec.eps,
            boundaries: &self.spec.boundaries,
            intervals: &self.spec.intervals,
            rows,
        })
        .expect("plain report serializes")
    }
}
