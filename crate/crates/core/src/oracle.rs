//! Brute-force reference implementations.
//!
//! Everything here follows the problem definitions literally and shares no
//! distance or table code with the solvers: distances are recomputed with a
//! full dynamic-programming table, occurrences by scanning every window or
//! every substring. Inputs are checked against an [`OracleBudget`] before any
//! exponential enumeration starts.

use crate::error::{AlcsError, Result};
use crate::solver::{Occurrence, Outcome, Problem, Solution};
use crate::strings::{Alphabet, DistanceMetric, IndeterminateString, LetterSet, StringSet};

/// Size caps for the exponential searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleBudget {
    pub max_len: usize,
    pub max_strings: usize,
    pub max_k: u32,
    /// Longest candidate length enumerated by [`brute_kt_lcs`].
    pub max_enum_len: usize,
}

impl Default for OracleBudget {
    fn default() -> Self {
        Self {
            max_len: 20,
            max_strings: 6,
            max_k: 4,
            max_enum_len: 8,
        }
    }
}

impl OracleBudget {
    /// Defaults overridden by `ALCS_ORACLE_MAX_LEN`, `ALCS_ORACLE_MAX_STRINGS`,
    /// `ALCS_ORACLE_MAX_K` and `ALCS_ORACLE_MAX_ENUM_LEN`.
    pub fn from_env() -> Self {
        fn var<T: std::str::FromStr>(name: &str, default: T) -> T {
            std::env::var(name)
                .ok()
                .and_then(|v| v.trim().parse().ok())
                .unwrap_or(default)
        }
        let d = Self::default();
        Self {
            max_len: var("ALCS_ORACLE_MAX_LEN", d.max_len),
            max_strings: var("ALCS_ORACLE_MAX_STRINGS", d.max_strings),
            max_k: var("ALCS_ORACLE_MAX_K", d.max_k),
            max_enum_len: var("ALCS_ORACLE_MAX_ENUM_LEN", d.max_enum_len),
        }
    }

    fn check(&self, lens: impl Iterator<Item = usize>, m: usize, k: u32) -> Result<()> {
        if m > self.max_strings {
            return Err(AlcsError::BudgetExceeded(format!(
                "{m} strings (limit {})",
                self.max_strings
            )));
        }
        if k > self.max_k {
            return Err(AlcsError::BudgetExceeded(format!("k = {k} (limit {})", self.max_k)));
        }
        if let Some(len) = lens.max().filter(|&l| l > self.max_len) {
            return Err(AlcsError::BudgetExceeded(format!(
                "string of length {len} (limit {})",
                self.max_len
            )));
        }
        Ok(())
    }
}

fn hamming(u: &[u8], v: &[u8]) -> u32 {
    let mut d = 0;
    for i in 0..u.len() {
        if u[i] != v[i] {
            d += 1;
        }
    }
    d
}

/// Full (|u|+1)×(|v|+1) edit table under the metric's costs.
fn edit_full(u: &[u8], v: &[u8], metric: &DistanceMetric) -> u32 {
    let (sub, ins, del) = costs(metric);
    let mut d = vec![vec![0u32; v.len() + 1]; u.len() + 1];
    for i in 1..=u.len() {
        d[i][0] = d[i - 1][0] + del(u[i - 1]);
    }
    for j in 1..=v.len() {
        d[0][j] = d[0][j - 1] + ins(v[j - 1]);
    }
    for i in 1..=u.len() {
        for j in 1..=v.len() {
            let a = d[i - 1][j - 1] + sub(u[i - 1], v[j - 1]);
            let b = d[i - 1][j] + del(u[i - 1]);
            let c = d[i][j - 1] + ins(v[j - 1]);
            d[i][j] = a.min(b).min(c);
        }
    }
    d[u.len()][v.len()]
}

type Costs<'a> = (
    Box<dyn Fn(u8, u8) -> u32 + 'a>,
    Box<dyn Fn(u8) -> u32 + 'a>,
    Box<dyn Fn(u8) -> u32 + 'a>,
);

fn costs(metric: &DistanceMetric) -> Costs<'_> {
    match metric {
        DistanceMetric::Weighted(c) => (
            Box::new(move |a, b| c.substitution(a, b)),
            Box::new(move |a| c.insertion(a)),
            Box::new(move |a| c.deletion(a)),
        ),
        _ => (
            Box::new(|a, b| u32::from(a != b)),
            Box::new(|_| 1),
            Box::new(|_| 1),
        ),
    }
}

/// d_δ(u, v) recomputed from scratch; Hamming requires equal lengths.
pub fn oracle_distance(u: &[u8], v: &[u8], metric: &DistanceMetric) -> Result<u32> {
    match metric {
        DistanceMetric::Hamming if u.len() != v.len() => Err(AlcsError::LengthMismatch {
            left: u.len(),
            right: v.len(),
        }),
        DistanceMetric::Hamming => Ok(hamming(u, v)),
        _ => Ok(edit_full(u, v, metric)),
    }
}

/// A k-approximate occurrence of `u` in `s`: the first window (Hamming) or
/// the first substring `s[a..b]` in `(a, b)` order, the empty one included
/// (edit metrics).
pub fn brute_k_approx_occurs(u: &[u8], s: &[u8], k: u32, metric: &DistanceMetric) -> Option<Occurrence> {
    if u.is_empty() {
        return None;
    }
    let hit = |start: usize, end: usize, d: u32| Occurrence {
        string: 0,
        start,
        end,
        distance: d,
    };
    match metric {
        DistanceMetric::Hamming => {
            if u.len() > s.len() {
                return None;
            }
            (0..=s.len() - u.len()).find_map(|a| {
                let d = hamming(u, &s[a..a + u.len()]);
                (d <= k).then(|| hit(a, a + u.len(), d))
            })
        }
        _ => (0..=s.len()).find_map(|a| {
            // Every indel costs at least 1, so lengths further than k apart
            // from |u| cannot qualify.
            let lo = (a + u.len()).saturating_sub(k as usize).max(a);
            let hi = (a + u.len() + k as usize).min(s.len());
            (lo..=hi).find_map(|b| {
                let d = edit_full(u, &s[a..b], metric);
                (d <= k).then(|| hit(a, b, d))
            })
        }),
    }
}

fn occurrences(u: &[u8], strings: &[Vec<u8>], k: u32, metric: &DistanceMetric) -> Vec<Occurrence> {
    strings
        .iter()
        .enumerate()
        .filter_map(|(j, s)| {
            brute_k_approx_occurs(u, s, k, metric).map(|mut o| {
                o.string = j;
                o
            })
        })
        .collect()
}

fn check_t(t: usize, m: usize) -> Result<()> {
    if t < 1 || t > m {
        return Err(AlcsError::ThresholdOutOfRange { t, m });
    }
    Ok(())
}

fn tag(t: usize, m: usize) -> Problem {
    if t == m {
        Problem::RkLcs
    } else {
        Problem::RktLcs
    }
}

/// Rkt-LCS by enumeration: every substring of every string, longest first,
/// then by source string and offset.
pub fn brute_rkt_lcs(
    set: &StringSet,
    k: u32,
    t: usize,
    metric: &DistanceMetric,
    budget: &OracleBudget,
) -> Result<Outcome> {
    let m = set.len();
    check_t(t, m)?;
    budget.check(set.iter().map(<[u8]>::len), m, k)?;
    let strings = set.strings();
    for len in (1..=set.max_len()).rev() {
        let mut found: Option<Solution> = None;
        let mut count = 0;
        for (i, s) in strings.iter().enumerate() {
            for p in 0..(s.len() + 1).saturating_sub(len) {
                let u = &s[p..p + len];
                let occ = occurrences(u, strings, k, metric);
                if occ.len() < t {
                    continue;
                }
                count += 1;
                if found.is_none() {
                    found = Some(Solution {
                        problem: tag(t, m),
                        metric: metric.kind(),
                        k,
                        t,
                        length: len,
                        source: Some((i, p)),
                        answer: u.to_vec(),
                        witnesses: occ,
                        maximizers: 0,
                    });
                }
            }
        }
        if let Some(mut sol) = found {
            sol.maximizers = count;
            return Ok(Outcome::Found(sol));
        }
    }
    Ok(Outcome::NoSolution)
}

/// Unrestricted kt-LCS over `alphabet`: every string of length
/// `l_max, l_max - 1, ..., 1` in lexicographic order.
pub fn brute_kt_lcs(
    set: &StringSet,
    k: u32,
    t: usize,
    alphabet: &Alphabet,
    l_max: usize,
    metric: &DistanceMetric,
    budget: &OracleBudget,
) -> Result<Outcome> {
    let m = set.len();
    check_t(t, m)?;
    budget.check(set.iter().map(<[u8]>::len), m, k)?;
    let sigma = alphabet.symbols();
    if l_max > budget.max_enum_len {
        return Err(AlcsError::BudgetExceeded(format!(
            "enumeration length {l_max} (limit {})",
            budget.max_enum_len
        )));
    }
    if (sigma.len() as f64).powi(l_max as i32) > (1u64 << 24) as f64 {
        return Err(AlcsError::BudgetExceeded(format!(
            "{}^{l_max} candidate strings",
            sigma.len()
        )));
    }
    let strings = set.strings();
    for len in (1..=l_max).rev() {
        let total = sigma.len().pow(len as u32);
        for code in 0..total {
            // Base-σ digits of `code`, most significant first.
            let mut u = vec![0u8; len];
            let mut rest = code;
            for slot in u.iter_mut().rev() {
                *slot = sigma[rest % sigma.len()];
                rest /= sigma.len();
            }
            let occ = occurrences(&u, strings, k, metric);
            if occ.len() >= t {
                return Ok(Outcome::Found(Solution {
                    problem: Problem::KtLcs,
                    metric: metric.kind(),
                    k,
                    t,
                    length: len,
                    source: None,
                    answer: u,
                    witnesses: occ,
                    maximizers: 1,
                }));
            }
        }
    }
    Ok(Outcome::NoSolution)
}

/// Offsets of one length-`len` substring per string, pairwise within
/// Hamming distance k, or `None`. Partial tuples are abandoned as soon as a
/// pair fails.
pub fn brute_rk_lcss_at(strings: &[Vec<u8>], k: u32, len: usize) -> Option<Vec<usize>> {
    if strings.iter().any(|s| s.len() < len) || len == 0 {
        return None;
    }
    fn rec(strings: &[Vec<u8>], k: u32, len: usize, chosen: &mut Vec<usize>) -> bool {
        let i = chosen.len();
        if i == strings.len() {
            return true;
        }
        for p in 0..=strings[i].len() - len {
            let u = &strings[i][p..p + len];
            let ok = chosen
                .iter()
                .enumerate()
                .all(|(j, &q)| hamming(u, &strings[j][q..q + len]) <= k);
            if ok {
                chosen.push(p);
                if rec(strings, k, len, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    let mut chosen = Vec::with_capacity(strings.len());
    rec(strings, k, len, &mut chosen).then_some(chosen)
}

/// Rk-LCSS under Hamming distance by descending length.
pub fn brute_rk_lcss(set: &StringSet, k: u32, budget: &OracleBudget) -> Result<Outcome> {
    budget.check(set.iter().map(<[u8]>::len), set.len(), k)?;
    let strings = set.strings();
    let shortest = strings.iter().map(Vec::len).min().unwrap_or(0);
    for len in (1..=shortest).rev() {
        if let Some(offsets) = brute_rk_lcss_at(strings, k, len) {
            let answer = strings[0][offsets[0]..offsets[0] + len].to_vec();
            let witnesses = offsets
                .iter()
                .enumerate()
                .map(|(j, &q)| Occurrence {
                    string: j,
                    start: q,
                    end: q + len,
                    distance: hamming(&answer, &strings[j][q..q + len]),
                })
                .collect();
            return Ok(Outcome::Found(Solution {
                problem: Problem::RkLcss,
                metric: crate::strings::MetricKind::Hamming,
                k,
                t: set.len(),
                length: len,
                source: Some((0, offsets[0])),
                answer,
                witnesses,
                maximizers: 1,
            }));
        }
    }
    Ok(Outcome::NoSolution)
}

fn set_mismatches(u: &[LetterSet], v: &[LetterSet]) -> u32 {
    let mut d = 0;
    for (a, b) in u.iter().zip(v) {
        if !a.letters().iter().any(|c| b.letters().contains(c)) {
            d += 1;
        }
    }
    d
}

/// Rkt-LCS over indeterminate strings by enumeration.
pub fn brute_rkt_lcs_indet(
    strings: &[IndeterminateString],
    k: u32,
    t: usize,
    budget: &OracleBudget,
) -> Result<Outcome> {
    let m = strings.len();
    if m < 2 {
        return Err(AlcsError::TooFewStrings { count: m });
    }
    check_t(t, m)?;
    budget.check(strings.iter().map(IndeterminateString::len), m, k)?;
    let longest = strings.iter().map(IndeterminateString::len).max().unwrap_or(0);
    for len in (1..=longest).rev() {
        for (i, s) in strings.iter().enumerate() {
            for p in 0..(s.len() + 1).saturating_sub(len) {
                let u = &s.positions()[p..p + len];
                let witnesses: Vec<Occurrence> = strings
                    .iter()
                    .enumerate()
                    .filter_map(|(j, sj)| {
                        let pos = sj.positions();
                        (0..(pos.len() + 1).saturating_sub(len)).find_map(|q| {
                            let d = set_mismatches(u, &pos[q..q + len]);
                            (d <= k).then_some(Occurrence {
                                string: j,
                                start: q,
                                end: q + len,
                                distance: d,
                            })
                        })
                    })
                    .collect();
                if witnesses.len() >= t {
                    return Ok(Outcome::Found(Solution {
                        problem: tag(t, m),
                        metric: crate::strings::MetricKind::Hamming,
                        k,
                        t,
                        length: len,
                        source: Some((i, p)),
                        answer: u.iter().map(ToString::to_string).collect::<String>().into_bytes(),
                        witnesses,
                        maximizers: 1,
                    }));
                }
            }
        }
    }
    Ok(Outcome::NoSolution)
}

fn dimension<V: AsRef<[u8]>>(sets: &[&[V]]) -> Result<usize> {
    let d = sets
        .iter()
        .flat_map(|s| s.iter())
        .map(|v| v.as_ref().len())
        .next()
        .unwrap_or(0);
    for v in sets.iter().flat_map(|s| s.iter()) {
        if v.as_ref().len() != d {
            return Err(AlcsError::DimensionMismatch {
                expected: d,
                found: v.as_ref().len(),
            });
        }
    }
    Ok(d)
}

fn orthogonal(u: &[u8], v: &[u8]) -> bool {
    u.iter().zip(v).all(|(a, b)| *a == 0 || *b == 0)
}

/// OV: two vectors at distinct indices of `a` with disjoint supports.
pub fn has_ov<V: AsRef<[u8]>>(a: &[V]) -> Result<Option<(usize, usize)>> {
    dimension(&[a])?;
    for x in 0..a.len() {
        for y in x + 1..a.len() {
            if orthogonal(a[x].as_ref(), a[y].as_ref()) {
                return Ok(Some((x, y)));
            }
        }
    }
    Ok(None)
}

/// An M-OV witness: `u = sets[set][index]` and, per partner set, the index
/// of a vector orthogonal to `u`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MovWitness {
    pub set: usize,
    pub index: usize,
    pub partners: Vec<(usize, usize)>,
}

fn m_ov<V: AsRef<[u8]>>(sets: &[Vec<V>], own_set: bool) -> Result<Option<MovWitness>> {
    let views: Vec<&[V]> = sets.iter().map(Vec::as_slice).collect();
    dimension(&views)?;
    if let Some(i) = sets.iter().position(Vec::is_empty) {
        return Err(AlcsError::InvalidParameter(format!("vector set {i} is empty")));
    }
    for (i, xi) in sets.iter().enumerate() {
        'u: for (x, u) in xi.iter().enumerate() {
            let mut partners = Vec::new();
            for (j, xj) in sets.iter().enumerate() {
                if j == i && !own_set {
                    continue;
                }
                match xj.iter().position(|v| orthogonal(u.as_ref(), v.as_ref())) {
                    Some(y) => partners.push((j, y)),
                    None => continue 'u,
                }
            }
            return Ok(Some(MovWitness {
                set: i,
                index: x,
                partners,
            }));
        }
    }
    Ok(None)
}

/// M-OV: some `u ∈ X_i` has an orthogonal partner in every `X_j`, `j ≠ i`.
pub fn has_m_ov<V: AsRef<[u8]>>(sets: &[Vec<V>]) -> Result<Option<MovWitness>> {
    m_ov(sets, false)
}

/// M-OV with the partner requirement extended to `u`'s own set (the partner
/// may be `u` itself only when `u` is the zero vector).
pub fn has_m_ov_inclusive<V: AsRef<[u8]>>(sets: &[Vec<V>]) -> Result<Option<MovWitness>> {
    m_ov(sets, true)
}

fn product_search<V: AsRef<[u8]>>(
    sets: &[Vec<V>],
    accept: impl Fn(&[&[u8]]) -> bool,
) -> Result<Option<Vec<usize>>> {
    let views: Vec<&[V]> = sets.iter().map(Vec::as_slice).collect();
    dimension(&views)?;
    if sets.iter().any(Vec::is_empty) {
        return Ok(None);
    }
    let mut idx = vec![0usize; sets.len()];
    loop {
        let pick: Vec<&[u8]> = idx.iter().zip(sets).map(|(&x, s)| s[x].as_ref()).collect();
        if accept(&pick) {
            return Ok(Some(idx));
        }
        let mut pos = sets.len();
        loop {
            if pos == 0 {
                return Ok(None);
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < sets[pos].len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// K-OV: one vector per set with no coordinate where all of them are 1.
pub fn has_k_ov<V: AsRef<[u8]>>(sets: &[Vec<V>]) -> Result<Option<Vec<usize>>> {
    product_search(sets, |pick| {
        let d = pick.first().map_or(0, |v| v.len());
        (0..d).all(|c| pick.iter().any(|v| v[c] == 0))
    })
}

/// Complete K-OV: one vector per set, pairwise orthogonal.
pub fn has_complete_k_ov<V: AsRef<[u8]>>(sets: &[Vec<V>]) -> Result<Option<Vec<usize>>> {
    product_search(sets, |pick| {
        (0..pick.len()).all(|a| (a + 1..pick.len()).all(|b| orthogonal(pick[a], pick[b])))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn occurrence_examples() {
        let h = DistanceMetric::Hamming;
        let occ = brute_k_approx_occurs(b"GAC", b"CGAAAT", 1, &h).unwrap();
        assert_eq!((occ.start, occ.end, occ.distance), (1, 4, 1));
        assert!(brute_k_approx_occurs(b"GAC", b"TGGTA", 1, &h).is_none());
        for m in [DistanceMetric::Hamming, DistanceMetric::Edit] {
            assert!(brute_k_approx_occurs(b"abc", b"abc", 0, &m).is_some());
        }
        // An empty occurrence is legal under edit distance.
        let occ = brute_k_approx_occurs(b"ab", b"x", 2, &DistanceMetric::Edit).unwrap();
        assert_eq!((occ.start, occ.end), (0, 0));
    }

    #[test]
    fn rkt_lcs_examples() {
        let set = StringSet::from_strs(&["aabcf", "fabcd", "dgiabc", "ahabch"]).unwrap();
        let b = OracleBudget::default();
        let h = DistanceMetric::Hamming;
        let out = brute_rkt_lcs(&set, 2, 3, &h, &b).unwrap();
        assert_eq!(out.length(), 5);
        assert_eq!(out.solution().unwrap().answer, b"aabcf");
        assert_eq!(brute_rkt_lcs(&set, 2, 4, &h, &b).unwrap().length(), 4);
        let pair = StringSet::from_strs(&["abcd", "abcd"]).unwrap();
        assert_eq!(brute_rkt_lcs(&pair, 0, 2, &h, &b).unwrap().length(), 4);
        let big = StringSet::from_strs(&["a".repeat(30).as_str(), "a"]).unwrap();
        assert!(matches!(brute_rkt_lcs(&big, 0, 2, &h, &b), Err(AlcsError::BudgetExceeded(_))));
    }

    #[test]
    fn kt_lcs_examples() {
        let set = StringSet::from_strs(&["ab", "ba"]).unwrap();
        let sigma = Alphabet::new(b"ab").unwrap();
        let b = OracleBudget::default();
        let h = DistanceMetric::Hamming;
        let out = brute_kt_lcs(&set, 1, 2, &sigma, 2, &h, &b).unwrap();
        assert_eq!(out.length(), 2);
        assert_eq!(out.solution().unwrap().answer, b"aa");
        // Neither input string is within 1 of the other, so the restricted answer is shorter.
        assert_eq!(brute_rkt_lcs(&set, 1, 2, &h, &b).unwrap().length(), 1);
        let exact = brute_kt_lcs(&set, 0, 2, &sigma, 2, &h, &b).unwrap();
        assert_eq!(exact.length(), brute_rkt_lcs(&set, 0, 2, &h, &b).unwrap().length());
        let unary = StringSet::from_strs(&["aaaa", "aa", "aaa"]).unwrap();
        let one = Alphabet::new(b"a").unwrap();
        assert_eq!(brute_kt_lcs(&unary, 2, 2, &one, 5, &h, &b).unwrap().length(), 3);
    }

    #[test]
    fn rk_lcss_examples() {
        let b = OracleBudget::default();
        let set = StringSet::from_strs(&["abab", "abab", "abab"]).unwrap();
        assert_eq!(brute_rk_lcss(&set, 0, &b).unwrap().length(), 4);
        let set = StringSet::from_strs(&["abc", "abd", "azc"]).unwrap();
        assert_eq!(brute_rk_lcss(&set, 1, &b).unwrap().length(), 2);
        let set = StringSet::from_strs(&["ab", "cd"]).unwrap();
        assert_eq!(brute_rk_lcss(&set, 0, &b).unwrap(), Outcome::NoSolution);
    }

    #[test]
    fn ov_predicates() {
        assert_eq!(has_ov(&[[1u8, 0], [0, 1]]).unwrap(), Some((0, 1)));
        assert_eq!(has_ov(&[[1u8, 1], [0, 1]]).unwrap(), None);
        let e = |i: usize| {
            let mut v = vec![0u8; 3];
            v[i] = 1;
            vec![v]
        };
        let sets = vec![e(0), e(1), e(2)];
        assert_eq!(has_complete_k_ov(&sets).unwrap(), Some(vec![0, 0, 0]));
        assert!(has_k_ov(&sets).unwrap().is_some());
        assert!(has_m_ov(&sets).unwrap().is_some());
        // Mismatched dimensions are rejected.
        let bad = vec![vec![vec![1u8, 0]], vec![vec![1u8]]];
        assert!(matches!(has_k_ov(&bad), Err(AlcsError::DimensionMismatch { .. })));
        // Only u's own set distinguishes the two M-OV readings.
        let sets = vec![vec![vec![1u8, 0], vec![1, 1]], vec![vec![0u8, 1]]];
        assert!(has_m_ov(&sets).unwrap().is_some());
        assert!(has_m_ov_inclusive(&sets).unwrap().is_none());
    }

    #[test]
    fn k_ov_is_weaker_than_complete() {
        // Three vectors with no common 1 but overlapping pairwise.
        let sets = vec![vec![vec![1u8, 1, 0]], vec![vec![0u8, 1, 1]], vec![vec![1u8, 0, 1]]];
        assert!(has_k_ov(&sets).unwrap().is_some());
        assert!(has_complete_k_ov(&sets).unwrap().is_none());
    }

    #[test]
    fn indeterminate_oracle() {
        let dna = Alphabet::dna();
        let set: Vec<_> = ["A[CG]T", "ACT", "AGT"]
            .iter()
            .map(|s| IndeterminateString::parse(s, &dna).unwrap())
            .collect();
        let out = brute_rkt_lcs_indet(&set, 0, 3, &OracleBudget::default()).unwrap();
        assert_eq!(out.length(), 3);
    }

    #[test]
    fn env_overrides() {
        // Only reads; the variables are unset in the test environment.
        let b = OracleBudget::from_env();
        assert!(b.max_len >= 1 && b.max_strings >= 1);
    }
}
