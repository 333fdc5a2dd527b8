//! Closed-form adjacency spectrum of `G(n, r, s)`.
//!
//! For `j in [0, r]`:
//!
//! ```text
//! lambda_j = sum_{l = max(0, j-s)}^{min(j, r-s)} (-1)^l C(j,l) C(r-j, r-s-l) C(n-r-j, r-s-l)
//! m_j      = C(n, j) - C(n, j-1)
//! ```
//!
//! Labels `j > n - r` (only possible when `2r > n`) carry no eigenspace: the
//! eigenvalue sum vanishes there and the multiplicity is reported as zero, so the
//! multiplicities stay nonnegative and still sum to `N`.
//!
//! `lambda_1` in the closed form is *not* the second-largest absolute eigenvalue;
//! the latter lives in [`SpectrumReport::second_abs_ratio`].

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::combinatorics::{binomial, binomial_or_zero};
use crate::error::{Error, Result};
use crate::graph::{ExplicitGraph, GraphParams};

/// Largest graph accepted by the dense numeric eigensolver.
pub const DEFAULT_NUMERIC_CAP: usize = 2000;

/// Default absolute tolerance for numeric spectrum validation.
pub const DEFAULT_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumEntry {
    pub j: u32,
    pub lambda: BigInt,
    pub mult: BigUint,
}

#[derive(Clone, Debug)]
pub struct SpectrumReport {
    pub entries: Vec<SpectrumEntry>,
    /// `|lambda| / N1` for the largest-magnitude eigenvalue over `j >= 1` with
    /// nonzero multiplicity. `None` for edgeless graphs.
    pub second_abs_ratio: Option<BigRational>,
    /// `-N1` occurs with positive multiplicity.
    pub bipartite: bool,
}

impl SpectrumReport {
    /// Largest `|lambda_j|` over `j >= 1` with positive multiplicity.
    pub fn second_abs_eigenvalue(&self) -> BigUint {
        self.entries
            .iter()
            .skip(1)
            .filter(|e| !e.mult.is_zero())
            .map(|e| e.lambda.magnitude().clone())
            .max()
            .unwrap_or_default()
    }

    /// Distinct eigenvalues with merged multiplicities, ascending, zero-multiplicity
    /// labels dropped.
    pub fn eigenvalue_multiset(&self) -> Vec<(BigInt, BigUint)> {
        let mut merged: Vec<(BigInt, BigUint)> = Vec::new();
        let mut sorted: Vec<&SpectrumEntry> =
            self.entries.iter().filter(|e| !e.mult.is_zero()).collect();
        sorted.sort_by(|a, b| a.lambda.cmp(&b.lambda));
        for e in sorted {
            match merged.last_mut() {
                Some((l, m)) if *l == e.lambda => *m += &e.mult,
                _ => merged.push((e.lambda.clone(), e.mult.clone())),
            }
        }
        merged
    }

    /// JSON array of `{j, lambda, mult}` with decimal-string integers.
    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Row {
            j: u32,
            lambda: String,
            mult: String,
        }
        let rows: Vec<Row> = self
            .entries
            .iter()
            .map(|e| Row {
                j: e.j,
                lambda: e.lambda.to_string(),
                mult: e.mult.to_string(),
            })
            .collect();
        serde_json::to_value(rows).expect("plain rows serialize")
    }
}

fn check_label(params: &GraphParams, j: u32) -> Result<()> {
    if j > params.r() {
        return Err(Error::range(format!(
            "spectral label j={j} outside [0, {}] for {params}",
            params.r()
        )));
    }
    Ok(())
}

/// Exact closed-form eigenvalue `lambda_j`.
pub fn eigenvalue(params: &GraphParams, j: u32) -> Result<BigInt> {
    check_label(params, j)?;
    let (n, r, s) = (params.n() as i64, params.r() as i64, params.s() as i64);
    let j = j as i64;
    if n - r - j < 0 {
        return Ok(BigInt::zero());
    }
    let mut total = BigInt::zero();
    for l in (j - s).max(0)..=j.min(r - s) {
        let c = binomial_or_zero(n - r - j, r - s - l);
        if c.is_zero() {
            continue;
        }
        let term = binomial(j as u64, l) * binomial_or_zero(r - j, r - s - l) * c;
        let term = BigInt::from_biguint(Sign::Plus, term);
        if l % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    Ok(total)
}

/// Multiplicity `m_j = C(n,j) - C(n,j-1)`, zero for `j > n - r`.
pub fn multiplicity(params: &GraphParams, j: u32) -> Result<BigUint> {
    check_label(params, j)?;
    if j > params.n() - params.r() {
        return Ok(BigUint::zero());
    }
    // j <= min(r, n-r) <= n/2, so C(n,j) >= C(n,j-1).
    Ok(binomial(params.n() as u64, j as i64) - binomial(params.n() as u64, j as i64 - 1))
}

pub fn full_spectrum(params: &GraphParams) -> SpectrumReport {
    let entries: Vec<SpectrumEntry> = (0..=params.r())
        .map(|j| SpectrumEntry {
            j,
            lambda: eigenvalue(params, j).expect("j in range"),
            mult: multiplicity(params, j).expect("j in range"),
        })
        .collect();
    let degree = params.degree();
    let mut report = SpectrumReport {
        entries,
        second_abs_ratio: None,
        bipartite: false,
    };
    if !degree.is_zero() {
        let lam = report.second_abs_eigenvalue();
        report.second_abs_ratio = Some(BigRational::new(lam.into(), degree.clone().into()));
        let neg = -BigInt::from(degree.clone());
        report.bipartite = report
            .entries
            .iter()
            .any(|e| e.lambda == neg && !e.mult.is_zero());
    }
    report
}

/// Outcome of comparing a closed-form spectrum with a numeric eigensolve.
#[derive(Clone, Debug)]
pub struct SpectrumValidation {
    pub passed: bool,
    /// Max `|numeric - closed form|` over the two sorted multisets.
    pub max_deviation: f64,
    /// Numeric eigenvalues grouped within `100 * tol`, as `(mean, count)`.
    pub numeric_clusters: Vec<(f64, usize)>,
    pub mismatch: Option<String>,
}

/// Dense symmetric eigensolve of the adjacency matrix, ascending.
pub fn numeric_eigenvalues(g: &ExplicitGraph, max_vertices: usize) -> Result<Vec<f64>> {
    let n = g.vertex_count();
    if n > max_vertices {
        return Err(Error::Size {
            what: "vertex count for dense eigensolve",
            actual: n.to_string(),
            cap: max_vertices as u64,
        });
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut a = faer::Mat::<f64>::zeros(n, n);
    for (u, v) in g.edges() {
        a[(u, v)] = 1.0;
        a[(v, u)] = 1.0;
    }
    let mut ev = a
        .self_adjoint_eigenvalues(faer::Side::Lower)
        .map_err(|e| Error::Consistency(format!("eigensolver failed: {e:?}")))?;
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

/// Checks the closed-form multiset in `report` against the numeric spectrum of `g`.
///
/// Passes iff the clustered numeric multiplicities equal the closed-form ones and
/// the max deviation is at most `tol`.
pub fn validate_spectrum(
    g: &ExplicitGraph,
    report: &SpectrumReport,
    tol: f64,
) -> Result<SpectrumValidation> {
    validate_spectrum_capped(g, report, tol, DEFAULT_NUMERIC_CAP)
}

pub fn validate_spectrum_capped(
    g: &ExplicitGraph,
    report: &SpectrumReport,
    tol: f64,
    max_vertices: usize,
) -> Result<SpectrumValidation> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::validation(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let numeric = numeric_eigenvalues(g, max_vertices)?;

    let mut numeric_clusters: Vec<(f64, usize)> = Vec::new();
    let mut cluster_sum = 0.0;
    for (i, &x) in numeric.iter().enumerate() {
        match numeric_clusters.last_mut() {
            Some((_, count)) if x - numeric[i - 1] <= 100.0 * tol => {
                *count += 1;
                cluster_sum += x;
            }
            _ => {
                if let Some((mean, count)) = numeric_clusters.last_mut() {
                    *mean = cluster_sum / *count as f64;
                }
                numeric_clusters.push((x, 1));
                cluster_sum = x;
            }
        }
    }
    if let Some((mean, count)) = numeric_clusters.last_mut() {
        *mean = cluster_sum / *count as f64;
    }

    let expected = report.eigenvalue_multiset();
    let mut mismatch = None;
    let mut expanded = Vec::with_capacity(numeric.len());
    for (l, m) in &expected {
        let m = m.to_usize().unwrap_or(usize::MAX);
        if expanded.len().saturating_add(m) > numeric.len() {
            mismatch = Some("closed-form multiplicities exceed the vertex count".to_string());
            break;
        }
        expanded.extend(std::iter::repeat_n(l.to_f64().unwrap_or(f64::NAN), m));
    }
    if mismatch.is_none() && expanded.len() != numeric.len() {
        mismatch = Some(format!(
            "closed form has {} eigenvalues, graph has {}",
            expanded.len(),
            numeric.len()
        ));
    }
    if mismatch.is_none() {
        if numeric_clusters.len() != expected.len() {
            mismatch = Some(format!(
                "{} numeric clusters vs {} distinct closed-form eigenvalues",
                numeric_clusters.len(),
                expected.len()
            ));
        } else if let Some(((mean, count), (l, m))) = numeric_clusters
            .iter()
            .zip(&expected)
            .find(|((_, c), (_, m))| BigUint::from(*c) != *m)
        {
            mismatch = Some(format!(
                "eigenvalue {l}: multiplicity {m} vs numeric cluster {mean:.6} x {count}"
            ));
        }
    }
    let max_deviation = if expanded.len() == numeric.len() {
        expanded
            .iter()
            .zip(&numeric)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    } else {
        f64::INFINITY
    };
    let passed = mismatch.is_none() && max_deviation <= tol;
    Ok(SpectrumValidation {
        passed,
        max_deviation,
        numeric_clusters,
        mismatch,
    })
}

/// Large-`n` behaviour of `lambda_j / N1` at fixed `(r, s)`.
#[derive(Clone, Debug, PartialEq)]
pub enum EigenAsymptotic {
    /// `j <= s`: the ratio tends to `C(r-j, s-j) / C(r, s)` with `O(1/n)` error.
    Limit(BigRational),
    /// `j > s`: `|lambda_j / N1| ~ coefficient * n^exponent`, exponent `-(j - s)`.
    Decay {
        coefficient: BigRational,
        exponent: i64,
    },
}

pub fn eigen_asymptotics(params: &GraphParams, j: u32) -> Result<EigenAsymptotic> {
    check_label(params, j)?;
    let (r, s) = (params.r() as u64, params.s() as u64);
    let j = j as u64;
    let crs = BigInt::from(binomial(r, s as i64));
    if j <= s {
        let num = BigInt::from(binomial(r - j, (s - j) as i64));
        return Ok(EigenAsymptotic::Limit(BigRational::new(num, crs)));
    }
    let factorial = |k: u64| (1..=k).fold(BigInt::one(), |acc, i| acc * i);
    let num = BigInt::from(binomial(j, s as i64)) * factorial(r - s);
    let den = crs * factorial(r - j);
    Ok(EigenAsymptotic::Decay {
        coefficient: BigRational::new(num, den),
        exponent: -((j - s) as i64),
    })
}
