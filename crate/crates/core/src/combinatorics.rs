//! Exact binomial coefficients and colexicographic codecs for `r`-subsets of `[n]`.
//!
//! Subsets are 1-based (elements in `1..=n`). Colex rank of `{c_1 < ... < c_r}` is
//! `sum_i C(c_i - 1, i)`, so `{1, .., r}` ranks first and `{n-r+1, .., n}` last.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision nonnegative count.
pub type BigCount = BigUint;

/// `C(n, k)` as an exact big integer; zero when `k < 0` or `k > n`.
pub fn binomial(n: u64, k: i64) -> BigCount {
    if k < 0 || k as u64 > n {
        return BigUint::zero();
    }
    let k = (k as u64).min(n - k as u64);
    if let Some(v) = binomial_u128(n, k) {
        return BigUint::from(v);
    }
    let mut acc = BigUint::one();
    for i in 1..=k {
        acc *= n - k + i;
        acc /= i;
    }
    acc
}

/// `C(n, k)` with the convention that it vanishes for `n < 0`, `k < 0` or `k > n`.
///
/// The closed-form eigenvalue sum evaluates binomials whose top argument can go
/// negative once `j > n - r`; every such term is zero.
pub fn binomial_or_zero(n: i64, k: i64) -> BigCount {
    if n < 0 {
        return BigUint::zero();
    }
    binomial(n as u64, k)
}

/// Fixed-width fast path; `None` on overflow.
fn binomial_u128(n: u64, k: u64) -> Option<u128> {
    let k = k.min(n.checked_sub(k)?);
    let mut acc: u128 = 1;
    for i in 1..=k as u128 {
        // acc * (n-k+i) is divisible by i since acc = C(n-k+i-1, i-1).
        acc = acc.checked_mul(n as u128 - k as u128 + i)? / i;
    }
    Some(acc)
}

/// `C(n, k)` in `u64`, `None` when it does not fit.
pub fn binomial_u64(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    binomial_u128(n, k).and_then(|v| u64::try_from(v).ok())
}

/// Natural logarithm of a big integer that may exceed the `f64` range.
pub fn ln_big(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().unwrap_or(f64::INFINITY);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// A strictly increasing `r`-subset of `[n]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subset {
    n: u32,
    elements: Vec<u32>,
}

impl Subset {
    pub fn new(elements: Vec<u32>, n: u32) -> Result<Self> {
        if let Some(&bad) = elements.iter().find(|&&e| e == 0 || e > n) {
            return Err(Error::validation(format!(
                "subset element {bad} outside [1, {n}]"
            )));
        }
        if elements.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::validation(format!(
                "subset elements {elements:?} are not strictly increasing"
            )));
        }
        Ok(Subset { n, elements })
    }

    pub fn elements(&self) -> &[u32] {
        &self.elements
    }

    pub fn arity(&self) -> usize {
        self.elements.len()
    }

    pub fn universe(&self) -> u32 {
        self.n
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.elements.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

/// Colexicographic rank of `x` among the `r`-subsets of `[n]`.
pub fn rank_subset(x: &Subset, n: u32) -> Result<u64> {
    if x.n != n {
        return Err(Error::validation(format!(
            "subset built for n={} ranked with n={n}",
            x.n
        )));
    }
    let r = x.arity() as u64;
    if binomial_u64(n as u64, r).is_none() {
        return Err(Error::range(format!("C({n},{r}) exceeds 64-bit ranks")));
    }
    let mut rank = 0u64;
    for (i, &e) in x.elements.iter().enumerate() {
        // Bounded by C(n, r), which fits.
        rank += binomial_u64(e as u64 - 1, i as u64 + 1).expect("bounded by C(n,r)");
    }
    Ok(rank)
}

/// Inverse of [`rank_subset`]: the subset at colex position `index`.
pub fn unrank_subset(index: u64, n: u32, r: u32) -> Result<Subset> {
    if r > n {
        return Err(Error::validation(format!("arity {r} exceeds n={n}")));
    }
    let total = binomial_u64(n as u64, r as u64)
        .ok_or_else(|| Error::range(format!("C({n},{r}) exceeds 64-bit ranks")))?;
    if index >= total {
        return Err(Error::range(format!(
            "index {index} not in [0, C({n},{r}) = {total})"
        )));
    }
    let mut rest = index;
    let mut elements = vec![0u32; r as usize];
    let mut hi = n as u64;
    for i in (1..=r as u64).rev() {
        // Largest c < hi with C(c, i) <= rest.
        let mut c = hi - 1;
        loop {
            let b = binomial_u64(c, i).expect("bounded by C(n,r)");
            if b <= rest {
                rest -= b;
                break;
            }
            c -= 1;
        }
        elements[i as usize - 1] = c as u32 + 1;
        hi = c;
    }
    Ok(Subset { n, elements })
}

/// All `r`-subsets of `[n]` in colex order, as 0-based element vectors.
///
/// Item `i` equals `unrank_subset(i, n, r)` shifted down by one.
pub(crate) struct ColexSubsets {
    n: u32,
    current: Option<Vec<u32>>,
}

impl ColexSubsets {
    pub(crate) fn new(n: u32, r: u32) -> Self {
        let current = (r <= n).then(|| (0..r).collect());
        ColexSubsets { n, current }
    }
}

impl Iterator for ColexSubsets {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        let cur = self.current.take()?;
        let out = cur.clone();
        let mut next = cur;
        let r = next.len();
        let mut i = 0;
        while i < r {
            let limit = if i + 1 < r { next[i + 1] } else { self.n };
            if next[i] + 1 < limit {
                next[i] += 1;
                for (k, slot) in next.iter_mut().enumerate().take(i) {
                    *slot = k as u32;
                }
                self.current = Some(next);
                break;
            }
            i += 1;
        }
        Some(out)
    }
}
