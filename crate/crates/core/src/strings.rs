//! Alphabets, validated string sets, indeterminate strings and the distance
//! primitives shared by every solver.
//!
//! Letters are plain bytes. An [`Alphabet`] fixes which bytes are legal and
//! their order; a [`StringSet`] is a validated collection of at least two
//! non-empty strings over one alphabet.

use std::fmt;
use std::sync::Arc;

use crate::error::{AlcsError, Result};

const NO_RANK: u16 = u16::MAX;

/// A finite, totally ordered set of byte letters.
#[derive(Clone)]
pub struct Alphabet {
    symbols: Vec<u8>,
    rank: [u16; 256],
}

impl Alphabet {
    /// Builds an alphabet from distinct symbols. Symbols are stored in
    /// ascending byte order.
    pub fn new(symbols: &[u8]) -> Result<Self> {
        if symbols.is_empty() {
            return Err(AlcsError::EmptyAlphabet);
        }
        let mut sorted = symbols.to_vec();
        sorted.sort_unstable();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(AlcsError::DuplicateSymbol(w[0]));
        }
        let mut rank = [NO_RANK; 256];
        for (r, &c) in sorted.iter().enumerate() {
            rank[c as usize] = r as u16;
        }
        Ok(Self {
            symbols: sorted,
            rank,
        })
    }

    /// Inclusive byte range, e.g. `Alphabet::range(b'a', b'z')`.
    pub fn range(first: u8, last: u8) -> Result<Self> {
        if first > last {
            return Err(AlcsError::EmptyAlphabet);
        }
        Self::new(&(first..=last).collect::<Vec<_>>())
    }

    pub fn binary() -> Self {
        Self::new(b"01").expect("static alphabet")
    }

    pub fn dna() -> Self {
        Self::new(b"ACGT").expect("static alphabet")
    }

    /// Smallest alphabet containing every letter of `strings`.
    pub fn infer<S: AsRef<[u8]>>(strings: &[S]) -> Result<Self> {
        let mut seen = [false; 256];
        for s in strings {
            for &c in s.as_ref() {
                seen[c as usize] = true;
            }
        }
        let symbols: Vec<u8> = (0..=255u8).filter(|&c| seen[c as usize]).collect();
        Self::new(&symbols)
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    /// σ
    pub fn size(&self) -> usize {
        self.symbols.len()
    }

    pub fn contains(&self, letter: u8) -> bool {
        self.rank[letter as usize] != NO_RANK
    }

    /// Zero-based position of `letter` in the ordered alphabet.
    pub fn rank(&self, letter: u8) -> Option<usize> {
        match self.rank[letter as usize] {
            NO_RANK => None,
            r => Some(r as usize),
        }
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Alphabet")
            .field(&String::from_utf8_lossy(&self.symbols))
            .finish()
    }
}

impl PartialEq for Alphabet {
    fn eq(&self, other: &Self) -> bool {
        self.symbols == other.symbols
    }
}

impl Eq for Alphabet {}

/// A validated set S = {s_1, ..., s_m} of non-empty strings, m ≥ 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StringSet {
    strings: Vec<Vec<u8>>,
    alphabet: Alphabet,
    total_len: usize,
    max_len: usize,
}

/// Table cells are 32-bit, so no single string may exceed this length.
pub const MAX_STRING_LEN: usize = (1 << 31) - 1;

impl StringSet {
    pub fn new<S: AsRef<[u8]>>(raw: &[S], alphabet: Alphabet) -> Result<Self> {
        validate_string_set(raw, alphabet)
    }

    /// Convenience constructor that infers the alphabet from the input.
    pub fn from_strs(raw: &[&str]) -> Result<Self> {
        let alphabet = Alphabet::infer(raw)?;
        validate_string_set(raw, alphabet)
    }

    pub fn strings(&self) -> &[Vec<u8>] {
        &self.strings
    }

    pub fn get(&self, index: usize) -> &[u8] {
        &self.strings[index]
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// m
    pub fn len(&self) -> usize {
        self.strings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strings.is_empty()
    }

    /// N, the sum of all string lengths.
    pub fn total_len(&self) -> usize {
        self.total_len
    }

    /// ℓ, the length of the longest string.
    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u8]> {
        self.strings.iter().map(Vec::as_slice)
    }
}

pub fn validate_string_set<S: AsRef<[u8]>>(raw: &[S], alphabet: Alphabet) -> Result<StringSet> {
    for (index, s) in raw.iter().enumerate() {
        let s = s.as_ref();
        if s.is_empty() {
            return Err(AlcsError::EmptyString { index });
        }
        if s.len() > MAX_STRING_LEN {
            return Err(AlcsError::TooLong(s.len()));
        }
        if let Some(position) = s.iter().position(|&c| !alphabet.contains(c)) {
            return Err(AlcsError::LetterOutOfAlphabet {
                index,
                position,
                letter: s[position],
            });
        }
    }
    if raw.len() < 2 {
        return Err(AlcsError::TooFewStrings { count: raw.len() });
    }
    let strings: Vec<Vec<u8>> = raw.iter().map(|s| s.as_ref().to_vec()).collect();
    let total_len = strings.iter().map(Vec::len).sum();
    let max_len = strings.iter().map(Vec::len).max().unwrap_or(0);
    Ok(StringSet {
        strings,
        alphabet,
        total_len,
        max_len,
    })
}

/// A non-empty set of letters, kept sorted and deduplicated.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LetterSet(Vec<u8>);

impl LetterSet {
    pub fn new(letters: &[u8]) -> Result<Self> {
        if letters.is_empty() {
            return Err(AlcsError::EmptyLetterSet);
        }
        let mut v = letters.to_vec();
        v.sort_unstable();
        v.dedup();
        Ok(Self(v))
    }

    pub fn single(letter: u8) -> Self {
        Self(vec![letter])
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, letter: u8) -> bool {
        self.0.binary_search(&letter).is_ok()
    }

    /// Sorted-merge intersection test, O(|a| + |b|).
    pub fn intersects(&self, other: &LetterSet) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return true,
            }
        }
        false
    }
}

impl fmt::Display for LetterSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.len() == 1 {
            write!(f, "{}", self.0[0] as char)
        } else {
            write!(f, "[{}]", String::from_utf8_lossy(&self.0))
        }
    }
}

/// True iff the two letter sets share a letter (s̃[i] ≈ s̃[j]).
pub fn letters_match(a: &LetterSet, b: &LetterSet) -> Result<bool> {
    if a.is_empty() || b.is_empty() {
        return Err(AlcsError::EmptyLetterSet);
    }
    Ok(a.intersects(b))
}

/// A string whose positions are non-empty letter sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndeterminateString {
    positions: Vec<LetterSet>,
}

impl IndeterminateString {
    pub fn new(positions: Vec<LetterSet>, alphabet: &Alphabet) -> Result<Self> {
        for (position, set) in positions.iter().enumerate() {
            if set.is_empty() {
                return Err(AlcsError::EmptyLetterSet);
            }
            if let Some(&letter) = set.letters().iter().find(|&&c| !alphabet.contains(c)) {
                return Err(AlcsError::LetterOutOfAlphabet {
                    index: 0,
                    position,
                    letter,
                });
            }
        }
        Ok(Self { positions })
    }

    /// Every position a singleton.
    pub fn from_determinate(s: &[u8]) -> Self {
        Self {
            positions: s.iter().map(|&c| LetterSet::single(c)).collect(),
        }
    }

    /// Parses bracket notation, e.g. `[AT]G[CG]T`.
    pub fn parse(text: &str, alphabet: &Alphabet) -> Result<Self> {
        let bytes = text.as_bytes();
        let mut positions = Vec::new();
        let mut i = 0;
        while i < bytes.len() {
            if bytes[i] == b'[' {
                let close = bytes[i..]
                    .iter()
                    .position(|&c| c == b']')
                    .ok_or_else(|| AlcsError::InvalidParameter(format!("unclosed '[' in {text:?}")))?;
                let group: Vec<u8> = bytes[i + 1..i + close]
                    .iter()
                    .copied()
                    .filter(|&c| c != b',')
                    .collect();
                positions.push(LetterSet::new(&group)?);
                i += close + 1;
            } else {
                positions.push(LetterSet::single(bytes[i]));
                i += 1;
            }
        }
        Self::new(positions, alphabet)
    }

    pub fn positions(&self) -> &[LetterSet] {
        &self.positions
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// True when at least one position holds more than one letter.
    pub fn is_strictly_indeterminate(&self) -> bool {
        self.positions.iter().any(|p| p.len() > 1)
    }
}

impl fmt::Display for IndeterminateString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.positions {
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MetricKind {
    Hamming,
    Edit,
    Weighted,
}

/// Integer operation costs for the weighted edit distance.
///
/// Substitution costs may be asymmetric; the resulting distance is then not
/// a metric, but every solver only needs "cost of turning pattern into
/// target".
#[derive(Clone, PartialEq, Eq)]
pub struct CostTable {
    sub: Vec<u32>,
    ins: [u32; 256],
    del: [u32; 256],
}

impl Default for CostTable {
    fn default() -> Self {
        Self::unit()
    }
}

impl CostTable {
    /// All true operations cost 1.
    pub fn unit() -> Self {
        let mut sub = vec![1u32; 256 * 256];
        for c in 0..256 {
            sub[c * 256 + c] = 0;
        }
        Self {
            sub,
            ins: [1; 256],
            del: [1; 256],
        }
    }

    pub fn set_substitution(&mut self, from: u8, to: u8, cost: u32) -> Result<()> {
        if from == to && cost != 0 {
            return Err(AlcsError::InvalidCost(format!(
                "substituting {:?} by itself must cost 0",
                from as char
            )));
        }
        if from != to && cost == 0 {
            return Err(AlcsError::InvalidCost(format!(
                "substitution {:?}->{:?} must cost at least 1",
                from as char, to as char
            )));
        }
        self.sub[from as usize * 256 + to as usize] = cost;
        Ok(())
    }

    pub fn set_insertion(&mut self, letter: u8, cost: u32) -> Result<()> {
        if cost == 0 {
            return Err(AlcsError::InvalidCost("insertion must cost at least 1".into()));
        }
        self.ins[letter as usize] = cost;
        Ok(())
    }

    pub fn set_deletion(&mut self, letter: u8, cost: u32) -> Result<()> {
        if cost == 0 {
            return Err(AlcsError::InvalidCost("deletion must cost at least 1".into()));
        }
        self.del[letter as usize] = cost;
        Ok(())
    }

    #[inline]
    pub fn substitution(&self, from: u8, to: u8) -> u32 {
        self.sub[from as usize * 256 + to as usize]
    }

    #[inline]
    pub fn insertion(&self, letter: u8) -> u32 {
        self.ins[letter as usize]
    }

    #[inline]
    pub fn deletion(&self, letter: u8) -> u32 {
        self.del[letter as usize]
    }

    /// Minimum positive cost among operations on letters of `alphabet`.
    pub fn min_positive_cost(&self, alphabet: &Alphabet) -> u32 {
        let syms = alphabet.symbols();
        let mut best = u32::MAX;
        for &a in syms {
            best = best.min(self.insertion(a)).min(self.deletion(a));
            for &b in syms {
                if a != b {
                    best = best.min(self.substitution(a, b));
                }
            }
        }
        best.max(1)
    }
}

impl fmt::Debug for CostTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("CostTable { .. }")
    }
}

/// The distance d_δ used to decide k-approximate occurrences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DistanceMetric {
    Hamming,
    Edit,
    Weighted(Arc<CostTable>),
}

impl DistanceMetric {
    pub fn weighted(costs: CostTable) -> Self {
        Self::Weighted(Arc::new(costs))
    }

    pub fn kind(&self) -> MetricKind {
        match self {
            Self::Hamming => MetricKind::Hamming,
            Self::Edit => MetricKind::Edit,
            Self::Weighted(_) => MetricKind::Weighted,
        }
    }

    pub fn is_edit_like(&self) -> bool {
        !matches!(self, Self::Hamming)
    }

    #[inline]
    pub(crate) fn sub_cost(&self, from: u8, to: u8) -> u32 {
        match self {
            Self::Weighted(c) => c.substitution(from, to),
            _ => (from != to) as u32,
        }
    }

    #[inline]
    pub(crate) fn ins_cost(&self, letter: u8) -> u32 {
        match self {
            Self::Weighted(c) => c.insertion(letter),
            _ => 1,
        }
    }

    #[inline]
    pub(crate) fn del_cost(&self, letter: u8) -> u32 {
        match self {
            Self::Weighted(c) => c.deletion(letter),
            _ => 1,
        }
    }

    /// c_min: the smallest positive operation cost (1 for unit costs).
    pub fn min_positive_cost(&self, alphabet: &Alphabet) -> u32 {
        match self {
            Self::Weighted(c) => c.min_positive_cost(alphabet),
            _ => 1,
        }
    }
}

/// Number of positions where `u` and `v` differ.
pub fn hamming_distance(u: &[u8], v: &[u8]) -> Result<u32> {
    if u.len() != v.len() {
        return Err(AlcsError::LengthMismatch {
            left: u.len(),
            right: v.len(),
        });
    }
    Ok(u.iter().zip(v).filter(|(a, b)| a != b).count() as u32)
}

/// Cost of transforming `u` into `v` with the metric's edit costs.
pub fn edit_distance(u: &[u8], v: &[u8], metric: &DistanceMetric) -> Result<u32> {
    if !metric.is_edit_like() {
        return Err(AlcsError::WrongMetric(metric.kind()));
    }
    // Single rolling row over v.
    let mut row: Vec<u32> = Vec::with_capacity(v.len() + 1);
    row.push(0);
    for &c in v {
        let last = *row.last().unwrap();
        row.push(last.saturating_add(metric.ins_cost(c)));
    }
    for &a in u {
        let mut diag = row[0];
        row[0] = row[0].saturating_add(metric.del_cost(a));
        for (j, &b) in v.iter().enumerate() {
            let up = row[j + 1];
            let best = diag
                .saturating_add(metric.sub_cost(a, b))
                .min(up.saturating_add(metric.del_cost(a)))
                .min(row[j].saturating_add(metric.ins_cost(b)));
            diag = up;
            row[j + 1] = best;
        }
    }
    Ok(row[v.len()])
}

/// Distance between a pattern and a candidate occurrence under `metric`.
pub fn distance(u: &[u8], v: &[u8], metric: &DistanceMetric) -> Result<u32> {
    match metric {
        DistanceMetric::Hamming => hamming_distance(u, v),
        _ => edit_distance(u, v, metric),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn full_table_edit(u: &[u8], v: &[u8]) -> u32 {
        let mut d = vec![vec![0u32; v.len() + 1]; u.len() + 1];
        for (i, row) in d.iter_mut().enumerate() {
            row[0] = i as u32;
        }
        for j in 0..=v.len() {
            d[0][j] = j as u32;
        }
        for i in 1..=u.len() {
            for j in 1..=v.len() {
                let s = d[i - 1][j - 1] + (u[i - 1] != v[j - 1]) as u32;
                d[i][j] = s.min(d[i - 1][j] + 1).min(d[i][j - 1] + 1);
            }
        }
        d[u.len()][v.len()]
    }

    #[test]
    fn validates_example_set() {
        let sigma = Alphabet::range(b'a', b'z').unwrap();
        let s = StringSet::new(&["aabcf", "fabcd", "dgiabc", "ahabch"], sigma).unwrap();
        assert_eq!(s.len(), 4);
        assert_eq!(s.max_len(), 6);
        assert_eq!(s.total_len(), 22);
    }

    #[test]
    fn minimal_set() {
        let s = StringSet::new(&["a", "b"], Alphabet::new(b"ab").unwrap()).unwrap();
        assert_eq!((s.len(), s.total_len(), s.max_len()), (2, 2, 1));
    }

    #[test]
    fn rejects_bad_sets() {
        let sigma = Alphabet::new(b"ab").unwrap();
        assert_eq!(
            StringSet::new(&["ab", ""], sigma.clone()),
            Err(AlcsError::EmptyString { index: 1 })
        );
        assert_eq!(
            StringSet::new(&["ab"], sigma.clone()),
            Err(AlcsError::TooFewStrings { count: 1 })
        );
        assert!(matches!(
            StringSet::new(&["ab", "ac"], sigma),
            Err(AlcsError::LetterOutOfAlphabet { index: 1, position: 1, letter: b'c' })
        ));
        assert_eq!(Alphabet::new(b"aba"), Err(AlcsError::DuplicateSymbol(b'a')));
        assert_eq!(Alphabet::new(b""), Err(AlcsError::EmptyAlphabet));
    }

    #[test]
    fn alphabet_is_ordered() {
        let a = Alphabet::new(b"TGCA").unwrap();
        assert_eq!(a.symbols(), b"ACGT");
        assert_eq!(a.rank(b'G'), Some(2));
        assert_eq!(a.rank(b'N'), None);
    }

    #[test]
    fn hamming_examples() {
        assert_eq!(hamming_distance(b"aabcf", b"fabcd"), Ok(2));
        assert_eq!(hamming_distance(b"abc", b"abc"), Ok(0));
        assert_eq!(
            hamming_distance(b"abc", b"abcd"),
            Err(AlcsError::LengthMismatch { left: 3, right: 4 })
        );
    }

    #[test]
    fn edit_examples() {
        assert_eq!(edit_distance(b"abc", b"abd", &DistanceMetric::Edit), Ok(1));
        assert_eq!(edit_distance(b"abc", b"", &DistanceMetric::Edit), Ok(3));
        let expected = full_table_edit(b"GTACAAT", b"CTTGTA");
        assert_eq!(expected, 5);
        assert_eq!(
            edit_distance(b"GTACAAT", b"CTTGTA", &DistanceMetric::Edit),
            Ok(expected)
        );
        assert_eq!(
            edit_distance(b"a", b"b", &DistanceMetric::Hamming),
            Err(AlcsError::WrongMetric(MetricKind::Hamming))
        );
    }

    #[test]
    fn weighted_costs_can_be_asymmetric() {
        let mut costs = CostTable::unit();
        costs.set_substitution(b'a', b'b', 5).unwrap();
        costs.set_deletion(b'a', 2).unwrap();
        let m = DistanceMetric::weighted(costs);
        // a->b costs 5 directly but delete(2)+insert(1) is cheaper.
        assert_eq!(edit_distance(b"a", b"b", &m), Ok(3));
        assert_eq!(edit_distance(b"b", b"a", &m), Ok(1));
        assert!(CostTable::unit().set_substitution(b'a', b'a', 1).is_err());
        assert!(CostTable::unit().set_insertion(b'a', 0).is_err());
    }

    #[test]
    fn letter_sets() {
        let at = LetterSet::new(b"TA").unwrap();
        let tg = LetterSet::new(b"TG").unwrap();
        assert_eq!(letters_match(&at, &tg), Ok(true));
        assert_eq!(
            letters_match(&LetterSet::single(b'A'), &LetterSet::single(b'C')),
            Ok(false)
        );
        assert_eq!(LetterSet::new(b""), Err(AlcsError::EmptyLetterSet));
        assert_eq!(at.letters(), b"AT");
    }

    #[test]
    fn parses_bracket_notation() {
        let s = IndeterminateString::parse("[A,T]G[CG]T", &Alphabet::dna()).unwrap();
        assert_eq!(s.len(), 4);
        assert!(s.is_strictly_indeterminate());
        assert_eq!(s.to_string(), "[AT]G[CG]T");
        assert!(!IndeterminateString::from_determinate(b"ACGT").is_strictly_indeterminate());
        assert!(IndeterminateString::parse("[AC", &Alphabet::dna()).is_err());
        assert!(IndeterminateString::parse("AXG", &Alphabet::dna()).is_err());
    }

    fn dna_triple(len: usize) -> impl Strategy<Value = (Vec<u8>, Vec<u8>, Vec<u8>)> {
        let s = || proptest::collection::vec(prop::sample::select(b"ACGT".to_vec()), len);
        (s(), s(), s())
    }

    proptest! {
        #[test]
        fn hamming_is_a_metric((a, b, c) in (1usize..16).prop_flat_map(dna_triple)) {
            let ab = hamming_distance(&a, &b).unwrap();
            prop_assert_eq!(ab, hamming_distance(&b, &a).unwrap());
            prop_assert_eq!(ab == 0, a == b);
            prop_assert!(ab <= hamming_distance(&a, &c).unwrap() + hamming_distance(&c, &b).unwrap());
        }

        #[test]
        fn edit_at_most_hamming((a, b, _) in (0usize..16).prop_flat_map(dna_triple)) {
            let e = edit_distance(&a, &b, &DistanceMetric::Edit).unwrap();
            prop_assert!(e <= hamming_distance(&a, &b).unwrap());
            prop_assert_eq!(e, full_table_edit(&a, &b));
        }

        #[test]
        fn letters_match_symmetric_reflexive(
            a in proptest::collection::vec(prop::sample::select(b"ACGT".to_vec()), 1..4),
            b in proptest::collection::vec(prop::sample::select(b"ACGT".to_vec()), 1..4),
        ) {
            let (a, b) = (LetterSet::new(&a).unwrap(), LetterSet::new(&b).unwrap());
            prop_assert!(letters_match(&a, &a).unwrap());
            prop_assert_eq!(letters_match(&a, &b).unwrap(), letters_match(&b, &a).unwrap());
        }
    }
}
