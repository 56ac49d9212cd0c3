//! Per-suffix occurrence statistics.
//!
//! For an anchor `(p, i)` the table has one row per prefix length
//! `l = 1..=|s_i| - p + 1` and one flag per string `j`: the flag is set when
//! `s_i[p..p+l-1]` has a k-approximate occurrence in `s_j`. The last column
//! counts the set flags. Column `i` is always fully set.
//!
//! Rows are packed bitsets over `j`. Both builders seed the row given by the
//! longest match starting at each target position and then push every row's
//! bits into the row above it, so a single word-wise OR sweep completes the
//! table.

use std::fmt::Write as _;

use crate::edit_prefix::{PrefixTable, NO_END};
use crate::error::{AlcsError, Result};
use crate::hamming_lcp::LcpTable;
use crate::strings::MetricKind;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LengthStatTable {
    p: usize,
    i: usize,
    m: usize,
    rows: usize,
    words: usize,
    k: u32,
    metric: MetricKind,
    bits: Vec<u64>,
    freq: Vec<u32>,
}

impl Default for LengthStatTable {
    fn default() -> Self {
        Self {
            p: 1,
            i: 0,
            m: 0,
            rows: 0,
            words: 0,
            k: 0,
            metric: MetricKind::Hamming,
            bits: Vec::new(),
            freq: Vec::new(),
        }
    }
}

impl LengthStatTable {
    /// Suffix start, 1-based.
    pub fn anchor_position(&self) -> usize {
        self.p
    }

    /// Source string, 0-based.
    pub fn anchor_string(&self) -> usize {
        self.i
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn strings(&self) -> usize {
        self.m
    }

    pub fn budget(&self) -> u32 {
        self.k
    }

    pub fn metric(&self) -> MetricKind {
        self.metric
    }

    /// Flag for prefix length `l` (1-based) and string `j` (1-based column).
    #[inline]
    pub fn get(&self, l: usize, j: usize) -> bool {
        debug_assert!(l >= 1 && l <= self.rows && j >= 1 && j <= self.m);
        let j = j - 1;
        self.bits[(l - 1) * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    /// Column m+1: the number of strings holding an occurrence.
    #[inline]
    pub fn frequency(&self, l: usize) -> u32 {
        self.freq[l - 1]
    }

    /// Largest `l` whose frequency reaches `t`, or 0.
    pub fn longest_with_frequency(&self, t: usize) -> usize {
        // The frequency column is non-increasing, so scan from the bottom.
        (1..=self.rows)
            .rev()
            .find(|&l| self.freq[l - 1] as usize >= t)
            .unwrap_or(0)
    }

    /// 0-based indices of strings flagged in row `l`.
    pub fn supporters(&self, l: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.m).filter(move |&j| self.get(l, j + 1))
    }

    /// Rows as tab-separated flags followed by the frequency.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for l in 1..=self.rows {
            for j in 1..=self.m {
                let _ = write!(out, "{}\t", u8::from(self.get(l, j)));
            }
            let _ = writeln!(out, "{}", self.freq[l - 1]);
        }
        out
    }

    fn reset(&mut self, p: usize, i: usize, m: usize, rows: usize, k: u32, metric: MetricKind) {
        self.p = p;
        self.i = i;
        self.m = m;
        self.rows = rows;
        self.words = m.div_ceil(64);
        self.k = k;
        self.metric = metric;
        self.bits.clear();
        self.bits.resize(rows * self.words, 0);
        self.freq.clear();
        self.freq.resize(rows, 0);
    }

    #[inline]
    fn seed(&mut self, l: usize, j: usize) {
        self.bits[(l - 1) * self.words + j / 64] |= 1 << (j % 64);
    }

    fn propagate(&mut self) {
        let w = self.words;
        for r in (2..=self.rows).rev() {
            let (upper, lower) = self.bits.split_at_mut((r - 1) * w);
            for (dst, src) in upper[(r - 2) * w..].iter_mut().zip(&lower[..w]) {
                *dst |= *src;
            }
        }
        for l in 0..self.rows {
            self.freq[l] = self.bits[l * w..(l + 1) * w]
                .iter()
                .map(|x| x.count_ones())
                .sum();
        }
    }
}

fn check_anchor(p: usize, len: usize) -> Result<()> {
    if p < 1 || p > len {
        return Err(AlcsError::IndexOutOfRange {
            index: p,
            bound: len,
        });
    }
    Ok(())
}

/// Builds the table for anchor `(p, i)` from the m tables LCP^{H,k}_{(s_i, s_j)}.
/// `p` is 1-based, `i` is 0-based.
pub fn length_stat_hamming(tables: &[LcpTable], p: usize, i: usize) -> Result<LengthStatTable> {
    let mut out = LengthStatTable::default();
    length_stat_hamming_into(&mut out, tables, p, i)?;
    Ok(out)
}

/// As [`length_stat_hamming`], reusing the allocation of `out`.
pub fn length_stat_hamming_into(
    out: &mut LengthStatTable,
    tables: &[LcpTable],
    p: usize,
    i: usize,
) -> Result<()> {
    let first = tables.first().ok_or(AlcsError::TooFewStrings { count: 0 })?;
    if i >= tables.len() {
        return Err(AlcsError::IndexOutOfRange {
            index: i + 1,
            bound: tables.len(),
        });
    }
    let len = first.rows();
    check_anchor(p, len)?;
    for t in tables {
        if t.rows() != len {
            return Err(AlcsError::LengthMismatch {
                left: len,
                right: t.rows(),
            });
        }
    }
    out.reset(p, i, tables.len(), len - p + 1, first.budget(), MetricKind::Hamming);
    for (j, t) in tables.iter().enumerate() {
        for &l in t.row(p) {
            if l >= 1 {
                out.seed(l as usize, j);
            }
        }
    }
    out.propagate();
    Ok(())
}

/// Builds the table for anchor `(p, i)` from the m prefix tables
/// P^{δ,k}_{(s_i, s_j)}, each holding at least pattern start `p`.
pub fn length_stat_edit(tables: &[PrefixTable], p: usize, i: usize) -> Result<LengthStatTable> {
    let mut out = LengthStatTable::default();
    length_stat_edit_into(&mut out, tables, p, i)?;
    Ok(out)
}

/// As [`length_stat_edit`], reusing the allocation of `out`.
pub fn length_stat_edit_into(
    out: &mut LengthStatTable,
    tables: &[PrefixTable],
    p: usize,
    i: usize,
) -> Result<()> {
    let first = tables.first().ok_or(AlcsError::TooFewStrings { count: 0 })?;
    if i >= tables.len() {
        return Err(AlcsError::IndexOutOfRange {
            index: i + 1,
            bound: tables.len(),
        });
    }
    let len = first.s1_len();
    check_anchor(p, len)?;
    for t in tables {
        if t.s1_len() != len {
            return Err(AlcsError::LengthMismatch {
                left: len,
                right: t.s1_len(),
            });
        }
        if !t.has_anchor(p) {
            return Err(AlcsError::IndexOutOfRange {
                index: p,
                bound: len,
            });
        }
    }
    let rows = len - p + 1;
    out.reset(p, i, tables.len(), rows, first.budget(), first.metric());
    for (j, t) in tables.iter().enumerate() {
        for q in 1..=t.s2_len() {
            // Shortening a pattern never breaks an occurrence, so the first
            // failing length bounds every longer one.
            let mut l = 0;
            while l < rows && t.get(p, p + l, q) != NO_END {
                l += 1;
            }
            if l >= 1 {
                out.seed(l, j);
            }
        }
    }
    out.propagate();
    Ok(())
}
