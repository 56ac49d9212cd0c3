//! Exact solvers for Rk-LCS, Rkt-LCS and Rk-LCSS.
//!
//! [`solve_rkt_lcs`] is the greedy candidate solver: for every string `s_i`
//! and suffix start `p` it builds a lengthStat table and keeps the longest
//! prefix whose frequency reaches `t`. [`solve_rk_lcs_maxlcp`] evaluates
//! `max_i max_p min_j MaxLCP_{(i,j)}[p]` instead, and
//! [`solve_rkt_lcs_via_subsets`] repeats that evaluation over every t-subset.
//! All three pick the same answer: the longest, then smallest `(i, p)`.

use rayon::prelude::*;

use crate::edit_prefix::{edit_prefix_table_at, max_lcp_edit_pair};
use crate::error::{AlcsError, Result};
use crate::hamming_lcp::{lcp_hk_table, lcp_tables_for, max_lcp_h, LcpTable, MaxLcpArray};
use crate::lengthstat::{
    length_stat_edit_into, length_stat_hamming_into, LengthStatTable,
};
use crate::strings::{distance, DistanceMetric, MetricKind, StringSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Problem {
    RkLcs,
    RktLcs,
    RkLcss,
    Elcs,
    KtLcs,
}

impl Problem {
    pub fn name(self) -> &'static str {
        match self {
            Problem::RkLcs => "rk-lcs",
            Problem::RktLcs => "rkt-lcs",
            Problem::RkLcss => "rk-lcss",
            Problem::Elcs => "elcs",
            Problem::KtLcs => "kt-lcs",
        }
    }
}

/// A substring `s_string[start..end]` (0-based, half-open) and its distance
/// to the answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Occurrence {
    pub string: usize,
    pub start: usize,
    pub end: usize,
    pub distance: u32,
}

impl Occurrence {
    pub fn len(&self) -> usize {
        self.end - self.start
    }

    /// An empty occurrence: the whole pattern was deleted within budget.
    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub problem: Problem,
    pub metric: MetricKind,
    pub k: u32,
    pub t: usize,
    pub length: usize,
    /// Source string and 0-based offset of the answer.
    pub source: Option<(usize, usize)>,
    /// Answer letters. Indeterminate answers hold their bracket rendering.
    pub answer: Vec<u8>,
    /// One occurrence per supporting string, ordered by string index. For
    /// Rk-LCSS there is one member per string and `distance` is measured
    /// against the member from string 0.
    pub witnesses: Vec<Occurrence>,
    /// How many (source, offset) pairs, or subsets for the subset solver,
    /// reach the optimum.
    pub maximizers: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Found(Solution),
    NoSolution,
}

impl Outcome {
    pub fn solution(&self) -> Option<&Solution> {
        match self {
            Outcome::Found(s) => Some(s),
            Outcome::NoSolution => None,
        }
    }

    /// Answer length, 0 for `NoSolution`.
    pub fn length(&self) -> usize {
        self.solution().map_or(0, |s| s.length)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveOptions {
    /// Process candidate strings on the rayon pool.
    pub parallel: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self { parallel: true }
    }
}

impl SolveOptions {
    pub fn serial() -> Self {
        Self { parallel: false }
    }
}

fn map_indices<T, F>(n: usize, parallel: bool, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    if parallel {
        (0..n).into_par_iter().map(f).collect()
    } else {
        (0..n).map(f).collect()
    }
}

pub(crate) fn check_threshold(t: usize, m: usize) -> Result<()> {
    if t < 1 || t > m {
        return Err(AlcsError::ThresholdOutOfRange { t, m });
    }
    Ok(())
}

/// A candidate: (length, string, 1-based offset).
pub(crate) type Best = (usize, usize, usize);

/// Longest first, then smallest string and offset.
fn better(a: Best, b: Best) -> bool {
    a.0 > b.0 || (a.0 == b.0 && (a.1, a.2) < (b.1, b.2))
}

fn pick(cands: impl IntoIterator<Item = Option<(usize, usize)>>) -> (Option<Best>, usize) {
    let mut best: Option<Best> = None;
    let mut ties = 0;
    for (i, c) in cands.into_iter().enumerate() {
        let Some((len, p)) = c else { continue };
        let cand = (len, i, p);
        match best {
            Some(b) if b.0 == len => ties += 1,
            Some(b) if !better(cand, b) => {}
            _ => {
                best = Some(cand);
                ties = 1;
            }
        }
    }
    (best, ties)
}

/// Best prefix of every suffix of `s_i` given its m Hamming LCP tables:
/// `(length, p)` and the number of `p` reaching that length.
fn candidate_from_lcp(tables: &[LcpTable], i: usize, t: usize) -> Result<(Option<(usize, usize)>, usize)> {
    let mut buf = LengthStatTable::default();
    let mut best: Option<(usize, usize)> = None;
    let mut ties = 0;
    for p in 1..=tables[i].rows() {
        length_stat_hamming_into(&mut buf, tables, p, i)?;
        record(&mut best, &mut ties, buf.longest_with_frequency(t), p);
    }
    Ok((best, ties))
}

fn record(best: &mut Option<(usize, usize)>, ties: &mut usize, l: usize, p: usize) {
    if l == 0 {
        return;
    }
    match best {
        Some((bl, _)) if *bl > l => {}
        Some((bl, _)) if *bl == l => *ties += 1,
        _ => {
            *best = Some((l, p));
            *ties = 1;
        }
    }
}

/// Shared greedy driver over Hamming-type LCP tables. `tables_for(i)` must
/// return the m tables of string `i` against every string.
pub(crate) fn greedy_hamming<F>(
    m: usize,
    t: usize,
    opts: SolveOptions,
    tables_for: F,
) -> Result<(Option<Best>, usize)>
where
    F: Fn(usize) -> Result<Vec<LcpTable>> + Sync + Send,
{
    let per_i = map_indices(m, opts.parallel, |i| {
        let tables = tables_for(i)?;
        candidate_from_lcp(&tables, i, t)
    })?;
    Ok(merge(per_i))
}

fn merge(per_i: Vec<(Option<(usize, usize)>, usize)>) -> (Option<Best>, usize) {
    let (best, _) = pick(per_i.iter().map(|c| c.0));
    let ties = best.map_or(0, |b| {
        per_i
            .iter()
            .filter(|c| c.0.is_some_and(|(l, _)| l == b.0))
            .map(|c| c.1)
            .sum()
    });
    (best, ties)
}

/// First k-approximate occurrence of `pattern` in `text`.
pub fn find_occurrence(
    pattern: &[u8],
    text: &[u8],
    string: usize,
    k: u32,
    metric: &DistanceMetric,
) -> Result<Option<Occurrence>> {
    if pattern.is_empty() {
        return Ok(None);
    }
    let span = match metric {
        DistanceMetric::Hamming => (0..text.len().saturating_sub(pattern.len() - 1))
            .find(|&q| {
                text[q..q + pattern.len()]
                    .iter()
                    .zip(pattern)
                    .filter(|(a, b)| a != b)
                    .count() as u32
                    <= k
            })
            .map(|q| (q, q + pattern.len())),
        _ => {
            let table = edit_prefix_table_at(pattern, text, 1, k, metric)?;
            table
                .first_occurrence(1, pattern.len())
                .map(|(a2, b2)| (a2 - 1, b2))
        }
    };
    span.map(|(start, end)| {
        Ok(Occurrence {
            string,
            start,
            end,
            distance: distance(pattern, &text[start..end], metric)?,
        })
    })
    .transpose()
}

fn build_solution(
    set: &StringSet,
    best: Best,
    ties: usize,
    problem: Problem,
    k: u32,
    t: usize,
    metric: &DistanceMetric,
) -> Result<Solution> {
    let (len, i, p) = best;
    let start = p - 1;
    let answer = set.get(i)[start..start + len].to_vec();
    let mut witnesses = Vec::new();
    for (j, s_j) in set.iter().enumerate() {
        if j == i {
            witnesses.push(Occurrence {
                string: i,
                start,
                end: start + len,
                distance: 0,
            });
        } else if let Some(occ) = find_occurrence(&answer, s_j, j, k, metric)? {
            witnesses.push(occ);
        }
    }
    Ok(Solution {
        problem,
        metric: metric.kind(),
        k,
        t,
        length: len,
        source: Some((i, start)),
        answer,
        witnesses,
        maximizers: ties,
    })
}

pub(crate) fn threshold_problem(t: usize, m: usize) -> Problem {
    if t == m {
        Problem::RkLcs
    } else {
        Problem::RktLcs
    }
}

/// Longest substring of some `s_i` with a k-approximate occurrence in at
/// least `t` of the strings (counting `s_i` itself). `t = m` is Rk-LCS.
pub fn solve_rkt_lcs(
    set: &StringSet,
    k: u32,
    t: usize,
    metric: &DistanceMetric,
    opts: SolveOptions,
) -> Result<Outcome> {
    let m = set.len();
    check_threshold(t, m)?;
    let (best, ties) = match metric {
        DistanceMetric::Hamming => greedy_hamming(m, t, opts, |i| lcp_tables_for(i, set, k))?,
        _ => {
            let per_i = map_indices(m, opts.parallel, |i| {
                let s_i = set.get(i);
                let mut buf = LengthStatTable::default();
                let mut best = None;
                let mut ties = 0;
                for p in 1..=s_i.len() {
                    // Only the slices for this suffix are alive at a time.
                    let tables = set
                        .iter()
                        .map(|s_j| edit_prefix_table_at(s_i, s_j, p, k, metric))
                        .collect::<Result<Vec<_>>>()?;
                    length_stat_edit_into(&mut buf, &tables, p, i)?;
                    record(&mut best, &mut ties, buf.longest_with_frequency(t), p);
                }
                Ok((best, ties))
            })?;
            merge(per_i)
        }
    };
    match best {
        None => Ok(Outcome::NoSolution),
        Some(b) => Ok(Outcome::Found(build_solution(
            set,
            b,
            ties,
            threshold_problem(t, m),
            k,
            t,
            metric,
        )?)),
    }
}

/// `arrays[i][j]` is MaxLCP^{δ,k}_{(s_i, s_j)}.
pub fn max_lcp_matrix(
    set: &StringSet,
    k: u32,
    metric: &DistanceMetric,
    opts: SolveOptions,
) -> Result<Vec<Vec<MaxLcpArray>>> {
    map_indices(set.len(), opts.parallel, |i| {
        set.iter()
            .map(|s_j| match metric {
                DistanceMetric::Hamming => Ok(max_lcp_h(&lcp_hk_table(set.get(i), s_j, k)?)),
                _ => max_lcp_edit_pair(set.get(i), s_j, k, metric),
            })
            .collect()
    })
}

/// max over `i ∈ members`, p of min over `j ∈ members` of `arrays[i][j][p]`.
fn max_max_min(arrays: &[Vec<MaxLcpArray>], members: &[usize]) -> (Option<Best>, usize) {
    let mut best: Option<Best> = None;
    let mut ties = 0;
    for &i in members {
        for p in 1..=arrays[i][i].len() {
            let v = members.iter().map(|&j| arrays[i][j].get(p)).min().unwrap_or(0) as usize;
            if v == 0 {
                continue;
            }
            let cand = (v, i, p);
            match best {
                Some(b) if b.0 == v => ties += 1,
                Some(b) if !better(cand, b) => {}
                _ => {
                    best = Some(cand);
                    ties = 1;
                }
            }
        }
    }
    (best, ties)
}

/// Rk-LCS by `max_i max_p min_j MaxLCP_{(i,j)}[p]`.
pub fn solve_rk_lcs_maxlcp(
    set: &StringSet,
    k: u32,
    metric: &DistanceMetric,
    opts: SolveOptions,
) -> Result<Outcome> {
    let arrays = max_lcp_matrix(set, k, metric, opts)?;
    let all: Vec<usize> = (0..set.len()).collect();
    match max_max_min(&arrays, &all) {
        (None, _) => Ok(Outcome::NoSolution),
        (Some(b), ties) => Ok(Outcome::Found(build_solution(
            set,
            b,
            ties,
            Problem::RkLcs,
            k,
            set.len(),
            metric,
        )?)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubsetLimits {
    pub max_strings: usize,
    pub max_subsets: u128,
}

impl Default for SubsetLimits {
    fn default() -> Self {
        Self {
            max_strings: 12,
            max_subsets: 924,
        }
    }
}

pub fn binomial(n: usize, r: usize) -> u128 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    (0..r).fold(1u128, |acc, x| acc * (n - x) as u128 / (x + 1) as u128)
}

/// Advances `c` to the next r-combination of `0..n` in lexicographic order.
fn next_combination(c: &mut [usize], n: usize) -> bool {
    let r = c.len();
    for pos in (0..r).rev() {
        if c[pos] < n - r + pos {
            c[pos] += 1;
            for q in pos + 1..r {
                c[q] = c[q - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Rkt-LCS by running the max-max-min evaluation on every t-subset of the
/// strings. Exponential in m by design; guarded by `limits`.
pub fn solve_rkt_lcs_via_subsets(
    set: &StringSet,
    k: u32,
    t: usize,
    metric: &DistanceMetric,
    limits: SubsetLimits,
    opts: SolveOptions,
) -> Result<Outcome> {
    let m = set.len();
    check_threshold(t, m)?;
    let subsets = binomial(m, t);
    if m > limits.max_strings || subsets > limits.max_subsets {
        return Err(AlcsError::SubsetExplosion {
            subsets,
            limit: limits.max_subsets,
        });
    }
    let arrays = max_lcp_matrix(set, k, metric, opts)?;
    let mut members: Vec<usize> = (0..t).collect();
    let mut best: Option<Best> = None;
    let mut ties = 0;
    loop {
        if let (Some(cand), _) = max_max_min(&arrays, &members) {
            match best {
                Some(b) if b.0 == cand.0 => {
                    ties += 1;
                    if better(cand, b) {
                        best = Some(cand);
                    }
                }
                Some(b) if !better(cand, b) => {}
                _ => {
                    best = Some(cand);
                    ties = 1;
                }
            }
        }
        if !next_combination(&mut members, m) {
            break;
        }
    }
    match best {
        None => Ok(Outcome::NoSolution),
        Some(b) => Ok(Outcome::Found(build_solution(
            set,
            b,
            ties,
            threshold_problem(t, m),
            k,
            t,
            metric,
        )?)),
    }
}

/// Adjacency of the m-partite graph on length-L windows.
struct WindowGraph {
    sizes: Vec<usize>,
    // adj[a][b] holds sizes[a] rows of words(sizes[b]) words each.
    adj: Vec<Vec<Vec<u64>>>,
}

fn words(n: usize) -> usize {
    n.div_ceil(64)
}

impl WindowGraph {
    fn build(set: &StringSet, len: usize, k: u32) -> Self {
        let m = set.len();
        let sizes: Vec<usize> = set.iter().map(|s| s.len() + 1 - len).collect();
        let mut adj = vec![vec![Vec::new(); m]; m];
        for a in 0..m {
            for b in a + 1..m {
                let (ab, ba) = window_edges(set.get(a), set.get(b), len, k);
                adj[a][b] = ab;
                adj[b][a] = ba;
            }
        }
        Self { sizes, adj }
    }

    #[inline]
    fn row(&self, a: usize, b: usize, x: usize) -> &[u64] {
        let w = words(self.sizes[b]);
        &self.adj[a][b][x * w..(x + 1) * w]
    }
}

/// Bit rows for window pairs within Hamming distance k, both directions.
fn window_edges(u: &[u8], v: &[u8], len: usize, k: u32) -> (Vec<u64>, Vec<u64>) {
    let (nu, nv) = (u.len() + 1 - len, v.len() + 1 - len);
    let (wu, wv) = (words(nu), words(nv));
    let mut ab = vec![0u64; nu * wv];
    let mut ba = vec![0u64; nv * wu];
    for d in -(nu as isize - 1)..nv as isize {
        let x0 = if d < 0 { (-d) as usize } else { 0 };
        let y0 = (x0 as isize + d) as usize;
        let diag = (u.len() - x0).min(v.len() - y0);
        if diag < len {
            continue;
        }
        let mism = |t: usize| u32::from(u[x0 + t] != v[y0 + t]);
        let mut count: u32 = (0..len).map(mism).sum();
        for s in 0..=diag - len {
            if s > 0 {
                count = count + mism(s + len - 1) - mism(s - 1);
            }
            if count <= k {
                let (x, y) = (x0 + s, y0 + s);
                ab[x * wv + y / 64] |= 1 << (y % 64);
                ba[y * wu + x / 64] |= 1 << (x % 64);
            }
        }
    }
    (ab, ba)
}

/// Searches for one window per part, pairwise adjacent. Parts are visited
/// by ascending size; each choice filters the remaining parts.
fn find_clique(g: &WindowGraph) -> Option<Vec<usize>> {
    let m = g.sizes.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by_key(|&a| (g.sizes[a], a));
    let mut cand: Vec<Vec<u64>> = g
        .sizes
        .iter()
        .map(|&n| {
            let mut row = vec![!0u64; words(n)];
            if n % 64 != 0 {
                *row.last_mut().unwrap() = (1u64 << (n % 64)) - 1;
            }
            row
        })
        .collect();
    let mut chosen = vec![0usize; m];
    if extend(g, &order, 0, &mut cand, &mut chosen) {
        Some(chosen)
    } else {
        None
    }
}

fn extend(
    g: &WindowGraph,
    order: &[usize],
    depth: usize,
    cand: &mut [Vec<u64>],
    chosen: &mut [usize],
) -> bool {
    if depth == order.len() {
        return true;
    }
    let part = order[depth];
    let rest = &order[depth + 1..];
    let pool = cand[part].clone();
    for (wi, &word) in pool.iter().enumerate() {
        let mut word = word;
        while word != 0 {
            let v = wi * 64 + word.trailing_zeros() as usize;
            word &= word - 1;
            let saved: Vec<Vec<u64>> = rest.iter().map(|&b| cand[b].clone()).collect();
            let mut alive = true;
            for &b in rest {
                let row = g.row(part, b, v);
                let mut any = 0u64;
                for (c, r) in cand[b].iter_mut().zip(row) {
                    *c &= r;
                    any |= *c;
                }
                if any == 0 {
                    alive = false;
                    break;
                }
            }
            if alive {
                chosen[part] = v;
                if extend(g, order, depth + 1, cand, chosen) {
                    return true;
                }
            }
            for (&b, s) in rest.iter().zip(saved) {
                cand[b] = s;
            }
        }
    }
    false
}

/// Rk-LCSS under Hamming distance: the largest L with one length-L
/// substring per string, pairwise within distance k.
pub fn solve_rk_lcss(set: &StringSet, k: u32, metric: &DistanceMetric) -> Result<Outcome> {
    if !matches!(metric, DistanceMetric::Hamming) {
        return Err(AlcsError::UnsupportedMetric(metric.kind()));
    }
    // Truncating every member keeps pairwise distances within k, so
    // feasibility is monotone in L.
    let (mut lo, mut hi) = (0usize, set.iter().map(<[u8]>::len).min().unwrap_or(0));
    let mut found: Option<(usize, Vec<usize>)> = None;
    while lo < hi {
        let mid = lo + (hi - lo).div_ceil(2);
        match find_clique(&WindowGraph::build(set, mid, k)) {
            Some(offsets) => {
                lo = mid;
                found = Some((mid, offsets));
            }
            None => hi = mid - 1,
        }
    }
    let Some((len, offsets)) = found else {
        return Ok(Outcome::NoSolution);
    };
    let answer = set.get(0)[offsets[0]..offsets[0] + len].to_vec();
    let witnesses = offsets
        .iter()
        .enumerate()
        .map(|(j, &off)| {
            Ok(Occurrence {
                string: j,
                start: off,
                end: off + len,
                distance: distance(&answer, &set.get(j)[off..off + len], metric)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Outcome::Found(Solution {
        problem: Problem::RkLcss,
        metric: MetricKind::Hamming,
        k,
        t: set.len(),
        length: len,
        source: Some((0, offsets[0])),
        answer,
        witnesses,
        maximizers: 1,
    }))
}
