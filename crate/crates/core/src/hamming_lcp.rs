//! k-mismatch longest-common-prefix tables.
//!
//! `LCP[p, q]` is the length of the longest common prefix of `s_i[p..]` and
//! `s_j[q..]` that contains at most `k` mismatches. Cell coordinates are
//! 1-based, like the positions they describe.
//!
//! Construction walks every diagonal once. Along a diagonal the mismatch
//! offsets are recorded in order; the entry for a start offset `t` is the
//! offset of the (k+1)-th mismatch at or after `t` (or the diagonal end)
//! minus `t`. That is O(|s_i|·|s_j|) regardless of `k`.

use std::fmt::Write as _;

use crate::error::{AlcsError, Result};
use crate::strings::{MetricKind, StringSet, MAX_STRING_LEN};

/// Row-major table of k-bounded LCP lengths between two strings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LcpTable {
    rows: usize,
    cols: usize,
    k: u32,
    entries: Vec<u32>,
    pair: Option<(usize, usize)>,
}

impl LcpTable {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn budget(&self) -> u32 {
        self.k
    }

    /// Source string indices (0-based) when built from a [`StringSet`].
    pub fn pair(&self) -> Option<(usize, usize)> {
        self.pair
    }

    /// Entry at 1-based position `(p, q)`.
    #[inline]
    pub fn get(&self, p: usize, q: usize) -> u32 {
        debug_assert!(p >= 1 && p <= self.rows && q >= 1 && q <= self.cols);
        self.entries[(p - 1) * self.cols + (q - 1)]
    }

    /// All entries of row `p` (1-based), indexed by `q - 1`.
    #[inline]
    pub fn row(&self, p: usize) -> &[u32] {
        &self.entries[(p - 1) * self.cols..p * self.cols]
    }

    /// Tab-separated dump, one line per row.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for p in 1..=self.rows {
            let line: Vec<String> = self.row(p).iter().map(u32::to_string).collect();
            let _ = writeln!(out, "{}", line.join("\t"));
        }
        out
    }
}

/// Builds an LCP table for a `rows × cols` grid where `mismatch(a, b)`
/// reports whether 0-based positions `a` and `b` disagree.
pub fn lcp_table_by<F>(rows: usize, cols: usize, k: u32, mut mismatch: F) -> Result<LcpTable>
where
    F: FnMut(usize, usize) -> bool,
{
    if rows == 0 || cols == 0 {
        return Err(AlcsError::EmptyString {
            index: if rows == 0 { 0 } else { 1 },
        });
    }
    if rows > MAX_STRING_LEN || cols > MAX_STRING_LEN {
        return Err(AlcsError::TooLong(rows.max(cols)));
    }
    let mut entries = vec![0u32; rows * cols];
    let mut mism: Vec<usize> = Vec::with_capacity(rows.min(cols));
    let k = k as usize;
    // Diagonal `d` holds cells (p, p + d); it runs from -(rows - 1) to cols - 1.
    for d in -(rows as isize - 1)..cols as isize {
        let p0 = if d < 0 { (-d) as usize } else { 0 };
        let q0 = (p0 as isize + d) as usize;
        let len = (rows - p0).min(cols - q0);
        mism.clear();
        mism.extend((0..len).filter(|&t| mismatch(p0 + t, q0 + t)));
        let mut first = 0;
        for t in 0..len {
            while first < mism.len() && mism[first] < t {
                first += 1;
            }
            let end = match first.checked_add(k).and_then(|i| mism.get(i)) {
                Some(&pos) => pos,
                None => len,
            };
            entries[(p0 + t) * cols + q0 + t] = (end - t) as u32;
        }
    }
    Ok(LcpTable {
        rows,
        cols,
        k: k as u32,
        entries,
        pair: None,
    })
}

/// LCP^{H,k} table of `s_i` against `s_j`.
pub fn lcp_hk_table(s_i: &[u8], s_j: &[u8], k: u32) -> Result<LcpTable> {
    lcp_table_by(s_i.len(), s_j.len(), k, |a, b| s_i[a] != s_j[b])
}

/// The m tables LCP^{H,k}_{(s_i, s_j)} for every `j`, including `j = i`.
/// `i` is 0-based.
pub fn lcp_tables_for(i: usize, set: &StringSet, k: u32) -> Result<Vec<LcpTable>> {
    if i >= set.len() {
        return Err(AlcsError::IndexOutOfRange {
            index: i + 1,
            bound: set.len(),
        });
    }
    let s_i = set.get(i);
    set.iter()
        .enumerate()
        .map(|(j, s_j)| {
            let mut t = lcp_hk_table(s_i, s_j, k)?;
            t.pair = Some((i, j));
            Ok(t)
        })
        .collect()
}

/// Per-suffix maximum of an LCP table against one partner string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxLcpArray {
    entries: Vec<u32>,
    metric: MetricKind,
}

impl MaxLcpArray {
    pub(crate) fn new(entries: Vec<u32>, metric: MetricKind) -> Self {
        Self { entries, metric }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn metric(&self) -> MetricKind {
        self.metric
    }

    /// Entry for the 1-based suffix start `p`.
    #[inline]
    pub fn get(&self, p: usize) -> u32 {
        self.entries[p - 1]
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.entries
    }
}

/// Row-wise maxima of a Hamming LCP table.
pub fn max_lcp_h(table: &LcpTable) -> MaxLcpArray {
    let entries = (1..=table.rows())
        .map(|p| table.row(p).iter().copied().max().unwrap_or(0))
        .collect();
    MaxLcpArray::new(entries, MetricKind::Hamming)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Per-cell scan: extend while the mismatch count stays within k.
    fn scan(a: &[u8], b: &[u8], k: u32) -> u32 {
        let mut mism = 0;
        let mut len = 0;
        for (x, y) in a.iter().zip(b) {
            if x != y {
                mism += 1;
                if mism > k {
                    break;
                }
            }
            len += 1;
        }
        len
    }

    #[test]
    fn table_one_spot_checks() {
        let t = lcp_hk_table(b"GTACAAT", b"CTTGTA", 2).unwrap();
        assert_eq!(t.get(2, 3), 4);
        assert_eq!(t.get(1, 1), 3);
        let max = max_lcp_h(&t);
        assert_eq!(max.get(2), 4);
        assert_eq!(max.get(7), 1);
    }

    #[test]
    fn identical_strings_zero_budget() {
        let s = b"abracadabra";
        let t = lcp_hk_table(s, s, 0).unwrap();
        for p in 1..=s.len() {
            assert_eq!(t.get(p, p) as usize, s.len() - p + 1);
        }
        let max = max_lcp_h(&t);
        for p in 1..=s.len() {
            assert_eq!(max.get(p) as usize, s.len() - p + 1);
        }
    }

    #[test]
    fn zero_when_first_letters_differ() {
        let t = lcp_hk_table(b"ab", b"ba", 0).unwrap();
        assert_eq!(t.get(1, 1), 0);
        assert_eq!(t.get(1, 2), 1);
    }

    #[test]
    fn tables_for_every_partner() {
        let set = StringSet::from_strs(&["TTGAC", "CGAAAT", "TGGTA"]).unwrap();
        let tables = lcp_tables_for(0, &set, 1).unwrap();
        assert_eq!(tables.len(), 3);
        // Row p = 3 (suffix GAC) against each string.
        assert_eq!(tables[0].row(3), &[1, 1, 3, 1, 1]);
        assert_eq!(tables[1].row(3), &[1, 3, 2, 2, 1, 1]);
        assert_eq!(tables[2].row(3), &[1, 2, 2, 2, 1]);
        assert_eq!(tables[1].pair(), Some((0, 1)));
        assert!(matches!(
            lcp_tables_for(3, &set, 1),
            Err(AlcsError::IndexOutOfRange { index: 4, bound: 3 })
        ));
    }

    #[test]
    fn identical_pair_diagonal() {
        let set = StringSet::from_strs(&["acgt", "acgt"]).unwrap();
        for t in lcp_tables_for(0, &set, 0).unwrap() {
            for p in 1..=4 {
                assert_eq!(t.get(p, p) as usize, 4 - p + 1);
            }
        }
    }

    #[test]
    fn tsv_dump() {
        let t = lcp_hk_table(b"ab", b"abb", 0).unwrap();
        assert_eq!(t.to_tsv(), "2\t0\t0\n0\t1\t1\n");
    }

    fn pair() -> impl Strategy<Value = (Vec<u8>, Vec<u8>, u32)> {
        let s = || proptest::collection::vec(prop::sample::select(b"ab".to_vec()), 1..40);
        (s(), s(), 0u32..5)
    }

    proptest! {
        #[test]
        fn equals_scan_oracle((a, b, k) in pair()) {
            let t = lcp_hk_table(&a, &b, k).unwrap();
            for p in 1..=a.len() {
                for q in 1..=b.len() {
                    prop_assert_eq!(t.get(p, q), scan(&a[p - 1..], &b[q - 1..], k));
                }
            }
        }

        #[test]
        fn exact_and_maximal((a, b, k) in pair()) {
            let t = lcp_hk_table(&a, &b, k).unwrap();
            for p in 1..=a.len() {
                for q in 1..=b.len() {
                    let l = t.get(p, q) as usize;
                    prop_assert!(l <= (a.len() - p + 1).min(b.len() - q + 1));
                    let mism = |n: usize| (0..n).filter(|&x| a[p - 1 + x] != b[q - 1 + x]).count() as u32;
                    prop_assert!(mism(l) <= k);
                    let runs_off = p - 1 + l == a.len() || q - 1 + l == b.len();
                    prop_assert!(runs_off || mism(l + 1) > k);
                }
            }
        }

        #[test]
        fn monotone_in_budget((a, b, k) in pair()) {
            let lo = lcp_hk_table(&a, &b, k).unwrap();
            let hi = lcp_hk_table(&a, &b, k + 1).unwrap();
            for p in 1..=a.len() {
                for q in 1..=b.len() {
                    prop_assert!(lo.get(p, q) <= hi.get(p, q));
                }
            }
        }
    }
}
