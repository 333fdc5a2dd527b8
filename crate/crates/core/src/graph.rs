//! Generalized Johnson graphs `G(n, r, s)`: vertices are the `r`-subsets of `[n]`,
//! adjacent when they share exactly `s` elements.
//!
//! [`GraphParams`] carries the exact vertex count and degree for any admissible
//! triple. [`build_graph`] materializes the adjacency in compressed sparse rows when
//! the vertex count is under a cap; vertex `i` is the colex-rank-`i` subset.

use std::collections::VecDeque;
use std::fmt;
use std::io::Write;

use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::combinatorics::{binomial, binomial_u64, unrank_subset, BigCount, ColexSubsets, Subset};
use crate::error::{Error, Result};

/// Default cap on materialized vertex counts.
pub const DEFAULT_MAX_VERTICES: u64 = 50_000;

/// Hard ceiling on stored adjacency entries (`N * N1`), about 1 GB of `u32`s.
pub const MAX_ADJACENCY_ENTRIES: u64 = 250_000_000;

/// The triple `(n, r, s)` with `0 <= s < r < n`, plus exact `N = C(n,r)` and
/// `N1 = C(r,s) C(n-r, r-s)`.
#[derive(Clone, PartialEq, Eq)]
pub struct GraphParams {
    n: u32,
    r: u32,
    s: u32,
    vertex_count: BigCount,
    degree: BigCount,
}

impl GraphParams {
    pub fn new(n: u32, r: u32, s: u32) -> Result<Self> {
        if !(s < r && r < n) {
            return Err(Error::validation(format!(
                "need 0 <= s < r < n, got n={n} r={r} s={s}"
            )));
        }
        let vertex_count = binomial(n as u64, r as i64);
        let outside = binomial((n - r) as u64, (r - s) as i64);
        let degree = if outside.is_zero() {
            outside
        } else {
            binomial(r as u64, s as i64) * outside
        };
        Ok(GraphParams {
            n,
            r,
            s,
            vertex_count,
            degree,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    /// `N = C(n, r)`.
    pub fn vertex_count(&self) -> &BigCount {
        &self.vertex_count
    }

    /// `N1 = C(r, s) C(n-r, r-s)`.
    pub fn degree(&self) -> &BigCount {
        &self.degree
    }

    pub fn vertex_count_u64(&self) -> Option<u64> {
        self.vertex_count.to_u64()
    }

    /// True when two `r`-subsets can never meet in exactly `s` points (`s < 2r - n`).
    pub fn is_edgeless(&self) -> bool {
        self.degree.is_zero()
    }

    /// Every admissible triple with `C(n, r) <= max_vertices`, ordered by `(n, r, s)`.
    pub fn all_up_to(max_vertices: u64) -> Vec<GraphParams> {
        let mut out = Vec::new();
        // C(n, 1) = n, so n itself is bounded by the cap.
        for n in 2..=max_vertices.min(u32::MAX as u64) as u32 {
            for r in 1..n {
                match binomial_u64(n as u64, r as u64) {
                    Some(v) if v <= max_vertices => {}
                    _ => continue,
                }
                for s in 0..r {
                    out.push(GraphParams::new(n, r, s).expect("admissible by construction"));
                }
            }
        }
        out
    }
}

impl fmt::Debug for GraphParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G({},{},{})", self.n, self.r, self.s)
    }
}

impl fmt::Display for GraphParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G({},{},{})", self.n, self.r, self.s)
    }
}

/// `|a ∩ b|` for two sorted subsets.
pub fn intersection_size(a: &Subset, b: &Subset) -> usize {
    let (a, b) = (a.elements(), b.elements());
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

/// An immutable simple graph stored as sorted neighbor lists.
#[derive(Clone, Debug)]
pub struct ExplicitGraph {
    params: Option<GraphParams>,
    offsets: Vec<usize>,
    targets: Vec<u32>,
    connected: bool,
}

impl ExplicitGraph {
    /// Builds a graph from arbitrary adjacency lists. Lists are sorted and must be
    /// symmetric, loop-free and duplicate-free.
    ///
    /// Graphs built this way are not assumed vertex-transitive.
    pub fn from_adjacency(mut lists: Vec<Vec<u32>>) -> Result<Self> {
        let n = lists.len();
        for (v, list) in lists.iter_mut().enumerate() {
            list.sort_unstable();
            if list.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::validation(format!(
                    "duplicate neighbor at vertex {v}"
                )));
            }
            if list.iter().any(|&u| u as usize >= n) {
                return Err(Error::validation(format!(
                    "neighbor out of range at vertex {v}"
                )));
            }
            if list.binary_search(&(v as u32)).is_ok() {
                return Err(Error::validation(format!("self-loop at vertex {v}")));
            }
        }
        for (v, list) in lists.iter().enumerate() {
            for &u in list {
                if lists[u as usize].binary_search(&(v as u32)).is_err() {
                    return Err(Error::validation(format!("edge {v}-{u} is not symmetric")));
                }
            }
        }
        Ok(Self::from_sorted_lists(None, lists))
    }

    fn from_sorted_lists(params: Option<GraphParams>, lists: Vec<Vec<u32>>) -> Self {
        let mut offsets = Vec::with_capacity(lists.len() + 1);
        offsets.push(0);
        let total: usize = lists.iter().map(Vec::len).sum();
        let mut targets = Vec::with_capacity(total);
        for list in lists {
            targets.extend_from_slice(&list);
            offsets.push(targets.len());
        }
        let mut g = ExplicitGraph {
            params,
            offsets,
            targets,
            connected: false,
        };
        g.connected = component_count(&g) <= 1;
        g
    }

    pub fn params(&self) -> Option<&GraphParams> {
        self.params.as_ref()
    }

    pub fn vertex_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.vertex_count()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .filter(move |&&v| v as usize > u)
                .map(move |&v| (u, v as usize))
        })
    }

    pub fn is_adjacent(&self, u: usize, v: usize) -> bool {
        self.neighbors(u).binary_search(&(v as u32)).is_ok()
    }

    pub fn is_connected(&self) -> bool {
        self.connected
    }

    /// Common degree, if the graph is regular.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = if self.vertex_count() == 0 {
            0
        } else {
            self.degree(0)
        };
        (0..self.vertex_count())
            .all(|v| self.degree(v) == d)
            .then_some(d)
    }

    /// Graphs built by [`build_graph`] are vertex-transitive; arbitrary adjacency is not
    /// assumed to be.
    pub fn is_vertex_transitive(&self) -> bool {
        self.params.is_some()
    }

    /// The subset labelling vertex `v`, for graphs built from parameters.
    pub fn subset(&self, v: usize) -> Option<Subset> {
        let p = self.params.as_ref()?;
        unrank_subset(v as u64, p.n, p.r).ok()
    }

    /// Plain-text edge list: a `# grs ...` header (for parameterized graphs), then one
    /// `u v` line per edge with `u < v`, lexicographically ordered.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> Result<()> {
        match &self.params {
            Some(p) => writeln!(
                out,
                "# grs n={} r={} s={} N={} N1={}",
                p.n, p.r, p.s, p.vertex_count, p.degree
            )?,
            None => writeln!(out, "# graph N={}", self.vertex_count())?,
        }
        for (u, v) in self.edges() {
            writeln!(out, "{u} {v}")?;
        }
        Ok(())
    }
}

/// Materializes `G(n, r, s)` when `N <= max_vertices`.
///
/// Edges come from pairwise intersection tests over subset bitsets; every vertex
/// degree is checked against `N1` before returning.
pub fn build_graph(params: &GraphParams, max_vertices: u64) -> Result<ExplicitGraph> {
    let n_vertices = match params.vertex_count_u64() {
        Some(v) if v <= max_vertices => v as usize,
        _ => {
            return Err(Error::Size {
                what: "vertex count N",
                actual: params.vertex_count.to_string(),
                cap: max_vertices,
            })
        }
    };
    let degree = params.degree.to_u64().unwrap_or(u64::MAX);
    let entries = (n_vertices as u64).saturating_mul(degree);
    if entries > MAX_ADJACENCY_ENTRIES {
        return Err(Error::Size {
            what: "adjacency entries N*N1",
            actual: entries.to_string(),
            cap: MAX_ADJACENCY_ENTRIES,
        });
    }
    if params.is_edgeless() {
        return Ok(ExplicitGraph::from_sorted_lists(
            Some(params.clone()),
            vec![Vec::new(); n_vertices],
        ));
    }

    let words = (params.n as usize).div_ceil(64);
    let r = params.r as usize;
    let mut bits = vec![0u64; n_vertices * words];
    let mut elems = Vec::with_capacity(n_vertices * r);
    for (v, subset) in ColexSubsets::new(params.n, params.r).enumerate() {
        let row = &mut bits[v * words..(v + 1) * words];
        for &e in &subset {
            row[e as usize / 64] |= 1 << (e % 64);
        }
        elems.extend(subset);
    }
    let s = params.s;
    // Probe one side's elements against the other's bitset when that is cheaper
    // than a full word-wise popcount.
    let probe = r < words;
    let upper: Vec<Vec<u32>> = (0..n_vertices)
        .into_par_iter()
        .map(|i| {
            let a = &bits[i * words..(i + 1) * words];
            (i + 1..n_vertices)
                .filter(|&j| {
                    let meet = if probe {
                        elems[j * r..(j + 1) * r]
                            .iter()
                            .filter(|&&e| a[e as usize / 64] >> (e % 64) & 1 == 1)
                            .count() as u32
                    } else {
                        let b = &bits[j * words..(j + 1) * words];
                        a.iter()
                            .zip(b)
                            .map(|(x, y)| (x & y).count_ones())
                            .sum::<u32>()
                    };
                    meet == s
                })
                .map(|j| j as u32)
                .collect()
        })
        .collect();
    drop(bits);
    drop(elems);

    let degree = degree as usize;
    let mut lists: Vec<Vec<u32>> = (0..n_vertices)
        .map(|_| Vec::with_capacity(degree))
        .collect();
    for (i, ups) in upper.iter().enumerate() {
        for &j in ups {
            lists[j as usize].push(i as u32);
        }
    }
    for (list, ups) in lists.iter_mut().zip(upper) {
        list.extend(ups);
    }
    if let Some((v, list)) = lists.iter().enumerate().find(|(_, l)| l.len() != degree) {
        return Err(Error::Consistency(format!(
            "{params}: vertex {v} has degree {} but N1 = {degree}",
            list.len()
        )));
    }
    Ok(ExplicitGraph::from_sorted_lists(
        Some(params.clone()),
        lists,
    ))
}

/// Breadth-first distances from `src`; `u32::MAX` marks unreachable vertices.
pub fn bfs_distances(g: &ExplicitGraph, src: usize) -> Vec<u32> {
    let mut dist = vec![u32::MAX; g.vertex_count()];
    let mut queue = VecDeque::new();
    dist[src] = 0;
    queue.push_back(src);
    while let Some(v) = queue.pop_front() {
        for &u in g.neighbors(v) {
            if dist[u as usize] == u32::MAX {
                dist[u as usize] = dist[v] + 1;
                queue.push_back(u as usize);
            }
        }
    }
    dist
}

fn component_count(g: &ExplicitGraph) -> usize {
    let mut seen = vec![false; g.vertex_count()];
    let mut stack = Vec::new();
    let mut components = 0;
    for start in 0..g.vertex_count() {
        if seen[start] {
            continue;
        }
        components += 1;
        seen[start] = true;
        stack.push(start);
        while let Some(v) = stack.pop() {
            for &u in g.neighbors(v) {
                if !std::mem::replace(&mut seen[u as usize], true) {
                    stack.push(u as usize);
                }
            }
        }
    }
    components
}

/// Two-colouring test over every component.
pub fn is_bipartite(g: &ExplicitGraph) -> bool {
    let mut colour = vec![u8::MAX; g.vertex_count()];
    let mut queue = VecDeque::new();
    for start in 0..g.vertex_count() {
        if colour[start] != u8::MAX {
            continue;
        }
        colour[start] = 0;
        queue.push_back(start);
        while let Some(v) = queue.pop_front() {
            for &u in g.neighbors(v) {
                let u = u as usize;
                if colour[u] == u8::MAX {
                    colour[u] = colour[v] ^ 1;
                    queue.push_back(u);
                } else if colour[u] == colour[v] {
                    return false;
                }
            }
        }
    }
    true
}
