//! Longest approximate prefix tables for edit and weighted-edit distance.
//!
//! For a pattern substring `s_1[a..b]` and a target start `a'`, the table
//! holds the largest `b' ≥ a' - 1` such that `d(s_1[a..b], s_2[a'..b']) ≤ k`,
//! or `-1` when no such `b'` exists. `b' = a' - 1` stands for the empty
//! target substring. Positions are 1-based.
//!
//! Each start pair `(a, a')` runs one banded dynamic program over
//! `s_1[a..] × s_2[a'..]`. A cell more than `⌊k / c_min⌋` off the main
//! diagonal needs that many indels and so always costs more than `k`, which
//! bounds the band and gives O(kℓ) work per start pair.

use crate::error::{AlcsError, Result};
use crate::hamming_lcp::MaxLcpArray;
use crate::strings::{Alphabet, DistanceMetric, MetricKind, MAX_STRING_LEN};

/// Sentinel for "no b' satisfies the budget".
pub const NO_END: i64 = -1;

const INF: u32 = u32::MAX / 4;

#[derive(Debug, Clone, PartialEq, Eq)]
struct AnchorBlock {
    // Row stride: one cell per b in a..=|s_1|.
    width: usize,
    // (|s_2| + 1) rows, one per a'.
    ends: Vec<i32>,
}

/// P^{δ,k}_{(s_1, s_2)} restricted to a contiguous range of pattern starts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefixTable {
    s1_len: usize,
    s2_len: usize,
    k: u32,
    metric: MetricKind,
    first_anchor: usize,
    blocks: Vec<AnchorBlock>,
}

impl PrefixTable {
    pub fn s1_len(&self) -> usize {
        self.s1_len
    }

    pub fn s2_len(&self) -> usize {
        self.s2_len
    }

    pub fn budget(&self) -> u32 {
        self.k
    }

    pub fn metric(&self) -> MetricKind {
        self.metric
    }

    /// 1-based pattern starts stored in this table.
    pub fn anchors(&self) -> std::ops::RangeInclusive<usize> {
        self.first_anchor..=self.first_anchor + self.blocks.len() - 1
    }

    pub fn has_anchor(&self, a: usize) -> bool {
        self.anchors().contains(&a)
    }

    /// Whether every pattern start `1..=|s_1|` is stored.
    pub fn is_complete(&self) -> bool {
        self.first_anchor == 1 && self.blocks.len() == self.s1_len
    }

    /// P[a, b, a'] with 1-based `a ≤ b ≤ |s_1|` and `1 ≤ a' ≤ |s_2| + 1`.
    ///
    /// Panics if `a` is not stored or the coordinates are out of range.
    #[inline]
    pub fn get(&self, a: usize, b: usize, a2: usize) -> i64 {
        assert!(self.has_anchor(a), "anchor {a} not stored");
        assert!(a <= b && b <= self.s1_len && a2 >= 1 && a2 <= self.s2_len + 1);
        let block = &self.blocks[a - self.first_anchor];
        block.ends[(a2 - 1) * block.width + (b - a)] as i64
    }

    /// Whether `s_1[a..b]` has a k-approximate occurrence starting at some
    /// `a' ∈ 1..=|s_2|`, and the first such `(a', b')`.
    pub fn first_occurrence(&self, a: usize, b: usize) -> Option<(usize, usize)> {
        (1..=self.s2_len).find_map(|a2| {
            let end = self.get(a, b, a2);
            (end != NO_END).then_some((a2, end as usize))
        })
    }
}

/// Band half-width ⌊k / c_min⌋ over the letters that occur in either string.
fn band_width(s1: &[u8], s2: &[u8], k: u32, metric: &DistanceMetric) -> usize {
    let c_min = match Alphabet::infer(&[s1, s2]) {
        Ok(sigma) => metric.min_positive_cost(&sigma),
        Err(_) => 1,
    };
    (k / c_min.max(1)) as usize
}

fn check_inputs(s1: &[u8], s2: &[u8], metric: &DistanceMetric) -> Result<()> {
    if !metric.is_edit_like() {
        return Err(AlcsError::WrongMetric(metric.kind()));
    }
    if s1.is_empty() {
        return Err(AlcsError::EmptyString { index: 0 });
    }
    if s2.is_empty() {
        return Err(AlcsError::EmptyString { index: 1 });
    }
    if s1.len() > MAX_STRING_LEN || s2.len() > MAX_STRING_LEN {
        return Err(AlcsError::TooLong(s1.len().max(s2.len())));
    }
    Ok(())
}

/// Reusable scratch rows for the banded dynamic program.
#[derive(Default)]
struct BandScratch {
    prev: Vec<u32>,
    cur: Vec<u32>,
}

/// Fills `out[b - a]` with P[a, b, a'] for one start pair. `x = s_1[a..]`,
/// `y = s_2[a'..]`, `a2` is the 1-based target start.
fn fill_start_pair(
    x: &[u8],
    y: &[u8],
    a2: usize,
    k: u32,
    w: usize,
    metric: &DistanceMetric,
    scratch: &mut BandScratch,
    out: &mut [i32],
) {
    let n = x.len();
    let ylen = y.len();
    let w = w.min(n.max(ylen));
    let span = 2 * w + 1;
    // Band cell (i, j) lives at index j + w - i.
    scratch.prev.clear();
    scratch.prev.resize(span, INF);
    scratch.cur.clear();
    scratch.cur.resize(span, INF);
    let prev = &mut scratch.prev;
    let cur = &mut scratch.cur;

    let mut acc = 0u32;
    prev[w] = 0;
    for j in 1..=w.min(ylen) {
        acc = acc.saturating_add(metric.ins_cost(y[j - 1])).min(INF);
        prev[j + w] = acc;
    }

    let mut dead = false;
    for i in 1..=n {
        if dead {
            out[i - 1] = NO_END as i32;
            continue;
        }
        let lo = i.saturating_sub(w);
        let hi = (i + w).min(ylen);
        cur.iter_mut().for_each(|c| *c = INF);
        let a = x[i - 1];
        let mut best_end: i64 = NO_END;
        let mut row_min = INF;
        for j in lo..=hi {
            let idx = j + w - i;
            // Deletion of x[i-1] comes from (i-1, j): index idx + 1 in prev.
            let mut v = if idx + 1 < span {
                prev[idx + 1].saturating_add(metric.del_cost(a))
            } else {
                INF
            };
            if j >= 1 {
                // Diagonal (i-1, j-1) sits at the same index in prev.
                v = v.min(prev[idx].saturating_add(metric.sub_cost(a, y[j - 1])));
                if idx >= 1 {
                    v = v.min(cur[idx - 1].saturating_add(metric.ins_cost(y[j - 1])));
                }
            }
            let v = v.min(INF);
            cur[idx] = v;
            row_min = row_min.min(v);
            if v <= k {
                best_end = (a2 - 1 + j) as i64;
            }
        }
        out[i - 1] = best_end as i32;
        if row_min > k {
            dead = true;
        }
        std::mem::swap(prev, cur);
    }
}

fn build_anchor(
    s1: &[u8],
    s2: &[u8],
    a: usize,
    k: u32,
    w: usize,
    metric: &DistanceMetric,
    scratch: &mut BandScratch,
) -> AnchorBlock {
    let width = s1.len() - a + 1;
    let mut ends = vec![NO_END as i32; width * (s2.len() + 1)];
    let x = &s1[a - 1..];
    for a2 in 1..=s2.len() + 1 {
        let y = &s2[a2 - 1..];
        fill_start_pair(
            x,
            y,
            a2,
            k,
            w,
            metric,
            scratch,
            &mut ends[(a2 - 1) * width..a2 * width],
        );
    }
    AnchorBlock { width, ends }
}

fn build_range(
    s1: &[u8],
    s2: &[u8],
    anchors: std::ops::RangeInclusive<usize>,
    k: u32,
    metric: &DistanceMetric,
) -> Result<PrefixTable> {
    check_inputs(s1, s2, metric)?;
    let (first, last) = (*anchors.start(), *anchors.end());
    if first < 1 || last > s1.len() || first > last {
        return Err(AlcsError::IndexOutOfRange {
            index: if first < 1 || first > last { first } else { last },
            bound: s1.len(),
        });
    }
    let w = band_width(s1, s2, k, metric);
    let mut scratch = BandScratch::default();
    let blocks = anchors
        .map(|a| build_anchor(s1, s2, a, k, w, metric, &mut scratch))
        .collect();
    Ok(PrefixTable {
        s1_len: s1.len(),
        s2_len: s2.len(),
        k,
        metric: metric.kind(),
        first_anchor: first,
        blocks,
    })
}

/// The complete table, O(kℓ³) time and O(ℓ³) space.
pub fn edit_prefix_table(
    s1: &[u8],
    s2: &[u8],
    k: u32,
    metric: &DistanceMetric,
) -> Result<PrefixTable> {
    check_inputs(s1, s2, metric)?;
    build_range(s1, s2, 1..=s1.len(), k, metric)
}

/// Only the slices for pattern start `a` (1-based): O(kℓ²) time, O(ℓ²) space.
pub fn edit_prefix_table_at(
    s1: &[u8],
    s2: &[u8],
    a: usize,
    k: u32,
    metric: &DistanceMetric,
) -> Result<PrefixTable> {
    build_range(s1, s2, a..=a, k, metric)
}

/// MaxLCP^{E,k}: for each pattern start `a`, the longest `l` such that
/// `s_1[a..a+l-1]` occurs within budget at some target start in `1..=|s_2|`.
pub fn max_lcp_e(table: &PrefixTable) -> Result<MaxLcpArray> {
    if !table.is_complete() {
        return Err(AlcsError::IndexOutOfRange {
            index: *table.anchors().start(),
            bound: table.s1_len(),
        });
    }
    let entries = (1..=table.s1_len)
        .map(|a| anchor_max_len(table, a))
        .collect();
    Ok(MaxLcpArray::new(entries, table.metric))
}

pub(crate) fn anchor_max_len(table: &PrefixTable, a: usize) -> u32 {
    // Occurrence is monotone in b, so scan from the longest pattern down.
    (a..=table.s1_len)
        .rev()
        .find(|&b| table.first_occurrence(a, b).is_some())
        .map_or(0, |b| (b - a + 1) as u32)
}

/// MaxLCP^{δ,k} for δ ∈ {E, W} without materialising the O(ℓ³) table.
pub fn max_lcp_edit_pair(
    s1: &[u8],
    s2: &[u8],
    k: u32,
    metric: &DistanceMetric,
) -> Result<MaxLcpArray> {
    check_inputs(s1, s2, metric)?;
    let mut entries = Vec::with_capacity(s1.len());
    for a in 1..=s1.len() {
        let t = edit_prefix_table_at(s1, s2, a, k, metric)?;
        entries.push(anchor_max_len(&t, a));
    }
    Ok(MaxLcpArray::new(entries, metric.kind()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strings::CostTable;
    use proptest::prelude::*;

    /// Unbanded full-table edit distance.
    fn dp(u: &[u8], v: &[u8], metric: &DistanceMetric) -> u32 {
        let mut d = vec![vec![0u32; v.len() + 1]; u.len() + 1];
        for i in 1..=u.len() {
            d[i][0] = d[i - 1][0] + metric.del_cost(u[i - 1]);
        }
        for j in 1..=v.len() {
            d[0][j] = d[0][j - 1] + metric.ins_cost(v[j - 1]);
        }
        for i in 1..=u.len() {
            for j in 1..=v.len() {
                d[i][j] = (d[i - 1][j - 1] + metric.sub_cost(u[i - 1], v[j - 1]))
                    .min(d[i - 1][j] + metric.del_cost(u[i - 1]))
                    .min(d[i][j - 1] + metric.ins_cost(v[j - 1]));
            }
        }
        d[u.len()][v.len()]
    }

    /// Definition-level P: try every b' from |s_2| down to a' - 1.
    fn brute_p(s1: &[u8], s2: &[u8], a: usize, b: usize, a2: usize, k: u32, m: &DistanceMetric) -> i64 {
        (a2 - 1..=s2.len())
            .rev()
            .find(|&b2| dp(&s1[a - 1..b], &s2[a2 - 1..b2], m) <= k)
            .map_or(NO_END, |b2| b2 as i64)
    }

    #[test]
    fn examples() {
        let t = edit_prefix_table(b"abc", b"abd", 1, &DistanceMetric::Edit).unwrap();
        assert_eq!(t.get(1, 3, 1), 3);
        assert_eq!(dp(b"abc", b"abd", &DistanceMetric::Edit), 1);
        let t = edit_prefix_table(b"abc", b"zabcy", 0, &DistanceMetric::Edit).unwrap();
        assert_eq!(t.get(1, 3, 2), 4);
        let t = edit_prefix_table(b"ab", b"x", 2, &DistanceMetric::Edit).unwrap();
        assert_eq!(t.get(1, 2, 1), 1);
        assert_eq!(t.get(1, 2, 2), 1);
        assert_eq!(brute_p(b"ab", b"x", 1, 2, 1, 2, &DistanceMetric::Edit), 1);
        assert_eq!(brute_p(b"ab", b"x", 1, 2, 2, 2, &DistanceMetric::Edit), 1);
    }

    #[test]
    fn max_lcp_examples() {
        let t = edit_prefix_table(b"abc", b"abd", 1, &DistanceMetric::Edit).unwrap();
        assert_eq!(max_lcp_e(&t).unwrap().get(1), 3);
        let s = b"gattaca";
        let t = edit_prefix_table(s, s, 0, &DistanceMetric::Edit).unwrap();
        let max = max_lcp_e(&t).unwrap();
        for a in 1..=s.len() {
            assert_eq!(max.get(a) as usize, s.len() - a + 1);
        }
        assert_eq!(max, max_lcp_edit_pair(s, s, 0, &DistanceMetric::Edit).unwrap());
    }

    #[test]
    fn errors() {
        assert_eq!(
            edit_prefix_table(b"a", b"b", 1, &DistanceMetric::Hamming),
            Err(AlcsError::WrongMetric(MetricKind::Hamming))
        );
        assert!(edit_prefix_table_at(b"abc", b"b", 4, 1, &DistanceMetric::Edit).is_err());
        let partial = edit_prefix_table_at(b"abc", b"b", 2, 1, &DistanceMetric::Edit).unwrap();
        assert!(max_lcp_e(&partial).is_err());
        assert!(partial.has_anchor(2) && !partial.has_anchor(1));
    }

    #[test]
    fn weighted_band_narrows() {
        let mut costs = CostTable::unit();
        for c in b"ab" {
            costs.set_insertion(*c, 3).unwrap();
            costs.set_deletion(*c, 3).unwrap();
        }
        costs.set_substitution(b'a', b'b', 2).unwrap();
        costs.set_substitution(b'b', b'a', 2).unwrap();
        let m = DistanceMetric::weighted(costs);
        let t = edit_prefix_table(b"abab", b"bbab", 2, &m).unwrap();
        for a in 1..=4 {
            for b in a..=4 {
                for a2 in 1..=5 {
                    assert_eq!(t.get(a, b, a2), brute_p(b"abab", b"bbab", a, b, a2, 2, &m));
                }
            }
        }
    }

    fn metric_strategy() -> impl Strategy<Value = DistanceMetric> {
        prop_oneof![
            Just(DistanceMetric::Edit),
            (1u32..4, 1u32..4, 1u32..4, 1u32..4).prop_map(|(s1, s2, i, d)| {
                let mut c = CostTable::unit();
                c.set_substitution(b'a', b'b', s1).unwrap();
                c.set_substitution(b'b', b'a', s2).unwrap();
                c.set_insertion(b'a', i).unwrap();
                c.set_deletion(b'b', d).unwrap();
                DistanceMetric::weighted(c)
            })
        ]
    }

    fn inputs() -> impl Strategy<Value = (Vec<u8>, Vec<u8>, u32, DistanceMetric)> {
        let s = || proptest::collection::vec(prop::sample::select(b"abc".to_vec()), 1..9);
        (s(), s(), 0u32..4, metric_strategy())
    }

    proptest! {
        #[test]
        fn matches_definition((s1, s2, k, m) in inputs()) {
            let t = edit_prefix_table(&s1, &s2, k, &m).unwrap();
            for a in 1..=s1.len() {
                for b in a..=s1.len() {
                    for a2 in 1..=s2.len() + 1 {
                        let got = t.get(a, b, a2);
                        prop_assert_eq!(got, brute_p(&s1, &s2, a, b, a2, k, &m));
                        prop_assert!(got == NO_END || (got >= a2 as i64 - 1 && got <= s2.len() as i64));
                    }
                }
            }
        }

        #[test]
        fn monotone_in_budget((s1, s2, k, m) in inputs()) {
            let lo = edit_prefix_table(&s1, &s2, k, &m).unwrap();
            let hi = edit_prefix_table(&s1, &s2, k + 1, &m).unwrap();
            for a in 1..=s1.len() {
                for b in a..=s1.len() {
                    for a2 in 1..=s2.len() + 1 {
                        prop_assert!(lo.get(a, b, a2) <= hi.get(a, b, a2));
                    }
                }
            }
        }

        #[test]
        fn short_patterns_always_fit(s1 in "[ab]{1,8}", s2 in "[ab]{1,8}", k in 0u32..4) {
            let (s1, s2) = (s1.into_bytes(), s2.into_bytes());
            let t = edit_prefix_table(&s1, &s2, k, &DistanceMetric::Edit).unwrap();
            for a in 1..=s1.len() {
                for b in a..=s1.len() {
                    if b - a + 1 <= k as usize {
                        for a2 in 1..=s2.len() + 1 {
                            prop_assert!(t.get(a, b, a2) >= a2 as i64 - 1);
                        }
                    }
                }
            }
        }

        #[test]
        fn max_lcp_matches_pairs(s1 in "[abc]{1,15}", s2 in "[abc]{1,15}", k in 0u32..3) {
            let (s1, s2) = (s1.into_bytes(), s2.into_bytes());
            let m = DistanceMetric::Edit;
            let max = max_lcp_edit_pair(&s1, &s2, k, &m).unwrap();
            for a in 1..=s1.len() {
                // Longest pattern s1[a..b] within k of any s2[a2..b2], a2 ≤ |s2|.
                let mut expect = 0;
                for b in a..=s1.len() {
                    let hit = (1..=s2.len()).any(|a2| (a2 - 1..=s2.len()).any(|b2| dp(&s1[a - 1..b], &s2[a2 - 1..b2], &m) <= k));
                    if hit {
                        expect = b - a + 1;
                    }
                }
                prop_assert_eq!(max.get(a) as usize, expect);
            }
        }
    }
}
