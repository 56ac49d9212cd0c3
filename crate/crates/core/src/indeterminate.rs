//! Rkt-LCS over indeterminate strings under Hamming distance.
//!
//! Two positions match when their letter sets intersect. The match relation
//! for a pair of strings is the compatibility matrix `I`, which is the
//! binarized product of the two Boolean encoding matrices. Once `I` exists
//! the LCP table is the determinate one with `I[p, q] = 0` as the mismatch
//! test.

use std::fmt::Write as _;

use crate::error::{AlcsError, Result};
use crate::hamming_lcp::{lcp_table_by, LcpTable};
use crate::solver::{
    check_threshold, greedy_hamming, threshold_problem, Occurrence, Outcome, SolveOptions,
    Solution,
};
use crate::strings::{Alphabet, IndeterminateString, LetterSet, MetricKind};

/// Dense 0/1 matrix, rows packed into u64 words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = cols.div_ceil(64);
        Self {
            rows,
            cols,
            stride,
            bits: vec![0; rows * stride],
        }
    }

    pub fn from_rows(rows: &[Vec<u8>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                if v != 0 {
                    m.set(r, c);
                }
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Entry at 0-based `(r, c)`.
    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        self.bits[r * self.stride + c / 64] >> (c % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize) {
        self.bits[r * self.stride + c / 64] |= 1 << (c % 64);
    }

    #[inline]
    fn row_words(&self, r: usize) -> &[u64] {
        &self.bits[r * self.stride..(r + 1) * self.stride]
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| u8::from(self.get(r, c))).collect())
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    t.set(c, r);
                }
            }
        }
        t
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for row in self.to_rows() {
            let cells: Vec<String> = row.iter().map(u8::to_string).collect();
            let _ = writeln!(out, "{}", cells.join("\t"));
        }
        out
    }
}

/// |s̃| × σ matrix with a 1 where the letter of column c is in position r.
pub fn encode_boolean_matrix(s: &IndeterminateString, alphabet: &Alphabet) -> BitMatrix {
    let mut m = BitMatrix::zeros(s.len(), alphabet.size());
    for (r, set) in s.positions().iter().enumerate() {
        for &c in set.letters() {
            if let Some(col) = alphabet.rank(c) {
                m.set(r, col);
            }
        }
    }
    m
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CompatMethod {
    /// Bitmask when σ ≤ 64, blocked otherwise.
    #[default]
    Auto,
    Blocked,
    Naive,
    Bitmask,
}

fn padded(rows: usize, sigma: usize) -> usize {
    rows.div_ceil(sigma) * sigma
}

/// Shares the encoding row layout, padded with zero rows to a multiple of σ.
fn padded_encoding(s: &IndeterminateString, alphabet: &Alphabet) -> BitMatrix {
    let sigma = alphabet.size();
    let mut m = BitMatrix::zeros(padded(s.len(), sigma), sigma);
    let enc = encode_boolean_matrix(s, alphabet);
    m.bits[..enc.bits.len()].copy_from_slice(&enc.bits);
    m
}

/// The integer product `s̃_i^M · (s̃_j^M)^T` over σ×σ blocks, truncated to
/// `|s̃_i| × |s̃_j|`. Entry `(p, q)` counts the letters shared by the two
/// positions.
pub fn compatibility_counts(
    si: &IndeterminateString,
    sj: &IndeterminateString,
    alphabet: &Alphabet,
) -> Vec<Vec<u32>> {
    let sigma = alphabet.size();
    let a = padded_encoding(si, alphabet);
    let b = padded_encoding(sj, alphabet);
    let mut out = vec![vec![0u32; sj.len()]; si.len()];
    for bi in (0..a.rows).step_by(sigma) {
        for bj in (0..b.rows).step_by(sigma) {
            // One σ×σ tile. The inner dimension is σ, a single block.
            for r in bi..bi + sigma {
                if r >= si.len() {
                    break;
                }
                let ar = a.row_words(r);
                for c in bj..(bj + sigma).min(sj.len()) {
                    out[r][c] += ar
                        .iter()
                        .zip(b.row_words(c))
                        .map(|(x, y)| (x & y).count_ones())
                        .sum::<u32>();
                }
            }
        }
    }
    out
}

fn binarize(counts: &[Vec<u32>], cols: usize) -> BitMatrix {
    let mut m = BitMatrix::zeros(counts.len(), cols);
    for (r, row) in counts.iter().enumerate() {
        for (c, &v) in row.iter().enumerate() {
            if v > 0 {
                m.set(r, c);
            }
        }
    }
    m
}

fn compat_naive(si: &IndeterminateString, sj: &IndeterminateString) -> BitMatrix {
    let mut m = BitMatrix::zeros(si.len(), sj.len());
    for (r, a) in si.positions().iter().enumerate() {
        for (c, b) in sj.positions().iter().enumerate() {
            if a.intersects(b) {
                m.set(r, c);
            }
        }
    }
    m
}

fn position_masks(s: &IndeterminateString, alphabet: &Alphabet) -> Vec<u64> {
    s.positions()
        .iter()
        .map(|set| {
            set.letters()
                .iter()
                .filter_map(|&c| alphabet.rank(c))
                .fold(0u64, |acc, r| acc | 1 << r)
        })
        .collect()
}

fn compat_bitmask(si: &IndeterminateString, sj: &IndeterminateString, alphabet: &Alphabet) -> BitMatrix {
    let (ma, mb) = (position_masks(si, alphabet), position_masks(sj, alphabet));
    let mut m = BitMatrix::zeros(si.len(), sj.len());
    for (r, &x) in ma.iter().enumerate() {
        for (c, &y) in mb.iter().enumerate() {
            if x & y != 0 {
                m.set(r, c);
            }
        }
    }
    m
}

/// `I[p, q] = 1` iff position `p` of `si` and position `q` of `sj` share a letter.
pub fn compatibility_matrix(
    si: &IndeterminateString,
    sj: &IndeterminateString,
    alphabet: &Alphabet,
    method: CompatMethod,
) -> Result<BitMatrix> {
    match method {
        CompatMethod::Naive => Ok(compat_naive(si, sj)),
        CompatMethod::Blocked => Ok(binarize(&compatibility_counts(si, sj, alphabet), sj.len())),
        CompatMethod::Bitmask if alphabet.size() > 64 => Err(AlcsError::InvalidParameter(format!(
            "bitmask path needs σ ≤ 64, got {}",
            alphabet.size()
        ))),
        CompatMethod::Bitmask => Ok(compat_bitmask(si, sj, alphabet)),
        CompatMethod::Auto if alphabet.size() <= 64 => Ok(compat_bitmask(si, sj, alphabet)),
        CompatMethod::Auto => Ok(binarize(&compatibility_counts(si, sj, alphabet), sj.len())),
    }
}

/// k-mismatch LCP table where positions mismatch iff `compat` holds a 0.
pub fn lcp_hk_indet(
    si: &IndeterminateString,
    sj: &IndeterminateString,
    k: u32,
    compat: &BitMatrix,
) -> Result<LcpTable> {
    if compat.rows() != si.len() {
        return Err(AlcsError::DimensionMismatch {
            expected: si.len(),
            found: compat.rows(),
        });
    }
    if compat.cols() != sj.len() {
        return Err(AlcsError::DimensionMismatch {
            expected: sj.len(),
            found: compat.cols(),
        });
    }
    lcp_table_by(si.len(), sj.len(), k, |a, b| !compat.get(a, b))
}

fn render(positions: &[LetterSet]) -> Vec<u8> {
    positions.iter().map(ToString::to_string).collect::<String>().into_bytes()
}

fn mismatches(u: &[LetterSet], v: &[LetterSet]) -> u32 {
    u.iter().zip(v).filter(|(a, b)| !a.intersects(b)).count() as u32
}

/// Greedy Rkt-LCS over indeterminate strings. With `k = 0` this is the exact
/// LCS of the strings that appear in at least `t` of them.
pub fn solve_rkt_lcs_indet(
    strings: &[IndeterminateString],
    alphabet: &Alphabet,
    k: u32,
    t: usize,
    opts: SolveOptions,
) -> Result<Outcome> {
    let m = strings.len();
    if m < 2 {
        return Err(AlcsError::TooFewStrings { count: m });
    }
    if let Some(index) = strings.iter().position(IndeterminateString::is_empty) {
        return Err(AlcsError::EmptyString { index });
    }
    check_threshold(t, m)?;
    let (best, ties) = greedy_hamming(m, t, opts, |i| {
        strings
            .iter()
            .map(|sj| {
                let compat = compatibility_matrix(&strings[i], sj, alphabet, CompatMethod::Auto)?;
                lcp_hk_indet(&strings[i], sj, k, &compat)
            })
            .collect()
    })?;
    let Some((len, i, p)) = best else {
        return Ok(Outcome::NoSolution);
    };
    let start = p - 1;
    let pattern = &strings[i].positions()[start..start + len];
    let witnesses = strings
        .iter()
        .enumerate()
        .filter_map(|(j, sj)| {
            let pos = sj.positions();
            let q = if j == i {
                Some(start)
            } else {
                (0..pos.len().saturating_sub(len - 1)).find(|&q| mismatches(pattern, &pos[q..q + len]) <= k)
            }?;
            Some(Occurrence {
                string: j,
                start: q,
                end: q + len,
                distance: mismatches(pattern, &pos[q..q + len]),
            })
        })
        .collect();
    Ok(Outcome::Found(Solution {
        problem: threshold_problem(t, m),
        metric: MetricKind::Hamming,
        k,
        t,
        length: len,
        source: Some((i, start)),
        answer: render(pattern),
        witnesses,
        maximizers: ties,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamming_lcp::lcp_hk_table;
    use proptest::prelude::*;

    fn dna() -> Alphabet {
        Alphabet::dna()
    }

    fn parse(s: &str) -> IndeterminateString {
        IndeterminateString::parse(s, &dna()).unwrap()
    }

    const METHODS: [CompatMethod; 4] = [
        CompatMethod::Auto,
        CompatMethod::Blocked,
        CompatMethod::Naive,
        CompatMethod::Bitmask,
    ];

    #[test]
    fn example_one() {
        let si = parse("[A,T]G[CG]T");
        let sj = parse("C[A,T]TA");
        let enc = encode_boolean_matrix(&si, &dna());
        assert_eq!(
            enc.to_rows(),
            [[1, 0, 0, 1], [0, 0, 1, 0], [0, 1, 1, 0], [0, 0, 0, 1]]
        );
        let expect = [[0, 1, 1, 1], [0, 0, 0, 0], [1, 0, 0, 0], [0, 1, 1, 0]];
        for method in METHODS {
            assert_eq!(compatibility_matrix(&si, &sj, &dna(), method).unwrap().to_rows(), expect);
        }
        // Position pair ([A,T], [A,T]) shares two letters.
        assert_eq!(compatibility_counts(&si, &sj, &dna())[0][1], 2);
        let compat = compatibility_matrix(&si, &sj, &dna(), CompatMethod::Naive).unwrap();
        let lcp = lcp_hk_indet(&si, &sj, 0, &compat).unwrap();
        assert_eq!(lcp.get(1, 2), 1);
    }

    #[test]
    fn determinate_reduces_to_hamming() {
        let a = IndeterminateString::from_determinate(b"GTACAAT");
        let b = IndeterminateString::from_determinate(b"CTTGTA");
        let compat = compatibility_matrix(&a, &b, &dna(), CompatMethod::Blocked).unwrap();
        assert_eq!(
            lcp_hk_indet(&a, &b, 2, &compat).unwrap(),
            lcp_hk_table(b"GTACAAT", b"CTTGTA", 2).unwrap()
        );
        let same = compatibility_matrix(&a, &a, &dna(), CompatMethod::Auto).unwrap();
        for r in 0..7 {
            for c in 0..7 {
                assert_eq!(same.get(r, c), b"GTACAAT"[r] == b"GTACAAT"[c]);
            }
        }
    }

    #[test]
    fn huge_budget_never_binds() {
        let a = parse("AC[GT]T");
        let b = parse("GGA");
        let compat = compatibility_matrix(&a, &b, &dna(), CompatMethod::Auto).unwrap();
        let lcp = lcp_hk_indet(&a, &b, 10, &compat).unwrap();
        for p in 1..=4 {
            for q in 1..=3 {
                assert_eq!(lcp.get(p, q) as usize, (5 - p).min(4 - q));
            }
        }
        assert!(lcp_hk_indet(&b, &a, 1, &compat).is_err());
    }

    #[test]
    fn solver_examples() {
        let set = [parse("A[CG]T"), parse("ACT"), parse("AGT")];
        let out = solve_rkt_lcs_indet(&set, &dna(), 0, 3, SolveOptions::serial()).unwrap();
        let sol = out.solution().unwrap();
        assert_eq!(sol.length, 3);
        assert_eq!(sol.answer, b"A[CG]T");
        assert_eq!(sol.witnesses.len(), 3);

        let disjoint = [parse("AAA"), parse("CCC"), parse("GT")];
        assert_eq!(
            solve_rkt_lcs_indet(&disjoint, &dna(), 0, 2, SolveOptions::serial()).unwrap(),
            Outcome::NoSolution
        );
        let same = [parse("ACGT"), parse("ACGT")];
        assert_eq!(
            solve_rkt_lcs_indet(&same, &dna(), 0, 2, SolveOptions::serial()).unwrap().length(),
            4
        );
        assert!(solve_rkt_lcs_indet(&same[..1], &dna(), 0, 1, SolveOptions::serial()).is_err());
    }

    #[test]
    fn wide_alphabet_uses_blocks() {
        let sigma = Alphabet::range(b'!', b'~').unwrap();
        assert!(sigma.size() > 64);
        let a = IndeterminateString::parse("a[xy~]!", &sigma).unwrap();
        let b = IndeterminateString::parse("[!~]ya", &sigma).unwrap();
        let blocked = compatibility_matrix(&a, &b, &sigma, CompatMethod::Blocked).unwrap();
        assert_eq!(blocked, compatibility_matrix(&a, &b, &sigma, CompatMethod::Naive).unwrap());
        assert_eq!(blocked, compatibility_matrix(&a, &b, &sigma, CompatMethod::Auto).unwrap());
        assert!(compatibility_matrix(&a, &b, &sigma, CompatMethod::Bitmask).is_err());
    }

    fn indet(max_len: usize) -> impl Strategy<Value = IndeterminateString> {
        let pos = proptest::collection::vec(prop::sample::select(b"ACGT".to_vec()), 1..4)
            .prop_map(|v| LetterSet::new(&v).unwrap());
        proptest::collection::vec(pos, 1..max_len)
            .prop_map(|p| IndeterminateString::new(p, &Alphabet::dna()).unwrap())
    }

    proptest! {
        #[test]
        fn paths_agree(a in indet(20), b in indet(20)) {
            let naive = compatibility_matrix(&a, &b, &dna(), CompatMethod::Naive).unwrap();
            prop_assert_eq!(&naive, &compatibility_matrix(&a, &b, &dna(), CompatMethod::Blocked).unwrap());
            prop_assert_eq!(&naive, &compatibility_matrix(&a, &b, &dna(), CompatMethod::Bitmask).unwrap());
            let back = compatibility_matrix(&b, &a, &dna(), CompatMethod::Naive).unwrap();
            prop_assert_eq!(naive.transpose(), back);
        }

        #[test]
        fn singletons_match_determinate(a in "[ACGT]{1,12}", b in "[ACGT]{1,12}", k in 0u32..3) {
            let (ia, ib) = (IndeterminateString::parse(&a, &dna()).unwrap(), IndeterminateString::parse(&b, &dna()).unwrap());
            let compat = compatibility_matrix(&ia, &ib, &dna(), CompatMethod::Auto).unwrap();
            prop_assert_eq!(
                lcp_hk_indet(&ia, &ib, k, &compat).unwrap(),
                lcp_hk_table(a.as_bytes(), b.as_bytes(), k).unwrap()
            );
        }
    }
}
