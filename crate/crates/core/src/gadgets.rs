//! Binary string instances built from orthogonal-vector families.
//!
//! [`build_rklcs_instance`] maps M vector sets to M + 1 strings whose Rk-LCS
//! length (with k = d) is large iff an M-OV solution exists.
//! [`build_rklcss_instance`] maps K sets to K strings whose Rk-LCSS length
//! (with k = 3d) is large iff a Complete K-OV solution exists. Every vector
//! image is surrounded by copies of a wall block `G = γ^d`.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{AlcsError, Result};
use crate::strings::{Alphabet, StringSet};

/// A 0/1 vector, one byte per coordinate.
pub type BitVector = Vec<u8>;

const MU: [&[u8; 7]; 2] = [b"0111000", b"0001000"];
const TAU: [&[u8; 7]; 2] = [b"0011000", b"1111000"];
const GAMMA: &[u8; 7] = b"1001000";

fn bit_index(bit: u8) -> Result<usize> {
    match bit {
        0 | 1 => Ok(bit as usize),
        _ => Err(AlcsError::InvalidParameter(format!("bit must be 0 or 1, got {bit}"))),
    }
}

/// μ image of one coordinate (the long string side).
pub fn morphism_mu(bit: u8) -> Result<&'static [u8]> {
    Ok(MU[bit_index(bit)?])
}

/// τ image of one coordinate (the per-set string side).
pub fn morphism_tau(bit: u8) -> Result<&'static [u8]> {
    Ok(TAU[bit_index(bit)?])
}

/// The 7-letter wall block.
pub fn gamma() -> &'static [u8] {
    GAMMA
}

/// τ_i for string `i` of `m` (1-based), length 2m + 7.
///
/// The 3-letter head alternates with the parity of `i`: odd indices use
/// 011 / 000, even indices 001 / 111. The middle block is the indicator of
/// `i` and the tail is `1 0^{m+3}`.
pub fn morphism_tau_indexed(m: usize, i: usize, bit: u8) -> Result<Vec<u8>> {
    if i < 1 || i > m {
        return Err(AlcsError::IndexOutOfRange { index: i, bound: m });
    }
    let b = bit_index(bit)?;
    let head: &[u8] = match (i % 2 == 1, b) {
        (true, 0) => b"011",
        (true, _) => b"000",
        (false, 0) => b"001",
        (false, _) => b"111",
    };
    let mut out = Vec::with_capacity(2 * m + 7);
    out.extend_from_slice(head);
    out.extend((1..=m).map(|x| if x == i { b'1' } else { b'0' }));
    out.push(b'1');
    out.extend(std::iter::repeat_n(b'0', m + 3));
    Ok(out)
}

/// `1 0^{m+2} 1 0^{m+3}`.
pub fn gamma_indexed(m: usize) -> Vec<u8> {
    let mut out = Vec::with_capacity(2 * m + 7);
    out.push(b'1');
    out.extend(std::iter::repeat_n(b'0', m + 2));
    out.push(b'1');
    out.extend(std::iter::repeat_n(b'0', m + 3));
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GadgetKind {
    RkLcs,
    RkLcss,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetInstance {
    pub kind: GadgetKind,
    pub strings: Vec<Vec<u8>>,
    pub k: u32,
    /// Number of vector sets (M or K).
    pub sets: usize,
    pub d: usize,
    /// Vectors per set.
    pub set_sizes: Vec<usize>,
    pub q: usize,
    /// Length reached when an orthogonal family exists.
    pub lower: usize,
    /// Bound the answer stays below otherwise.
    pub upper: usize,
    /// Whether the generator planted a solution, when known.
    pub planted: Option<bool>,
}

impl GadgetInstance {
    pub fn string_set(&self) -> Result<StringSet> {
        StringSet::new(&self.strings, Alphabet::binary())
    }

    /// One string per line.
    pub fn to_lines(&self) -> String {
        let mut out = String::new();
        for s in &self.strings {
            out.push_str(std::str::from_utf8(s).expect("binary strings are ASCII"));
            out.push('\n');
        }
        out
    }

    pub fn total_len(&self) -> usize {
        self.strings.iter().map(Vec::len).sum()
    }
}

fn check_family(sets: &[Vec<BitVector>]) -> Result<usize> {
    if sets.is_empty() {
        return Err(AlcsError::InvalidParameter("no vector sets".into()));
    }
    if let Some(i) = sets.iter().position(Vec::is_empty) {
        return Err(AlcsError::InvalidParameter(format!("vector set {i} is empty")));
    }
    let d = sets[0][0].len();
    if d == 0 {
        return Err(AlcsError::InvalidParameter("dimension must be at least 1".into()));
    }
    for v in sets.iter().flatten() {
        if v.len() != d {
            return Err(AlcsError::DimensionMismatch {
                expected: d,
                found: v.len(),
            });
        }
        if v.iter().any(|&b| b > 1) {
            return Err(AlcsError::InvalidParameter("vector entries must be 0 or 1".into()));
        }
    }
    Ok(d)
}

fn check_q(q: usize) -> Result<()> {
    if q == 0 {
        return Err(AlcsError::InvalidParameter("q must be at least 1".into()));
    }
    Ok(())
}

/// `W image W image ... image W` with `W = wall^q`.
fn walled<'a>(wall: &[u8], q: usize, images: impl Iterator<Item = Vec<u8>> + 'a) -> Vec<u8> {
    let w = wall.repeat(q);
    let mut out = w.clone();
    for img in images {
        out.extend_from_slice(&img);
        out.extend_from_slice(&w);
    }
    out
}

fn image(v: &[u8], f: impl Fn(u8) -> Vec<u8>) -> Vec<u8> {
    v.iter().flat_map(|&b| f(b)).collect()
}

/// Rk-LCS instance: `s_1` carries the μ images of every vector of every set,
/// `s_{j+1}` the τ images of `X_j`. k = d.
pub fn build_rklcs_instance(sets: &[Vec<BitVector>], q: usize) -> Result<GadgetInstance> {
    let d = check_family(sets)?;
    check_q(q)?;
    let wall = GAMMA.repeat(d);
    let mut strings = vec![walled(
        &wall,
        q,
        sets.iter().flatten().map(|v| image(v, |b| MU[b as usize].to_vec())),
    )];
    for x in sets {
        strings.push(walled(&wall, q, x.iter().map(|v| image(v, |b| TAU[b as usize].to_vec()))));
    }
    Ok(GadgetInstance {
        kind: GadgetKind::RkLcs,
        strings,
        k: d as u32,
        sets: sets.len(),
        d,
        set_sizes: sets.iter().map(Vec::len).collect(),
        q,
        lower: (14 * q + 7) * d,
        upper: (7 * q + 14) * d,
        planted: None,
    })
}

/// Rk-LCSS instance: `s_i` carries the τ_i images of `X_i`. All sets must
/// have the same size. k = 3d.
pub fn build_rklcss_instance(sets: &[Vec<BitVector>], q: usize) -> Result<GadgetInstance> {
    let d = check_family(sets)?;
    check_q(q)?;
    let m = sets.len();
    if m < 2 {
        return Err(AlcsError::TooFewStrings { count: m });
    }
    let nv = sets[0].len();
    if let Some(bad) = sets.iter().find(|x| x.len() != nv) {
        return Err(AlcsError::InvalidParameter(format!(
            "all sets need {nv} vectors, found one with {}",
            bad.len()
        )));
    }
    let wall = gamma_indexed(m).repeat(d);
    let taus: Vec<[Vec<u8>; 2]> = (1..=m)
        .map(|i| Ok([morphism_tau_indexed(m, i, 0)?, morphism_tau_indexed(m, i, 1)?]))
        .collect::<Result<_>>()?;
    let strings = sets
        .iter()
        .enumerate()
        .map(|(i, x)| walled(&wall, q, x.iter().map(|v| image(v, |b| taus[i][b as usize].clone()))))
        .collect();
    let unit = 2 * m + 7;
    Ok(GadgetInstance {
        kind: GadgetKind::RkLcss,
        strings,
        k: 3 * d as u32,
        sets: m,
        d,
        set_sizes: vec![nv; m],
        q,
        lower: unit * (2 * q + 1) * d,
        upper: unit * (q + 2) * d,
        planted: None,
    })
}

/// Splits `total` vectors over `parts` sets as evenly as possible.
pub fn even_sizes(total: usize, parts: usize) -> Result<Vec<usize>> {
    if parts == 0 || total < parts {
        return Err(AlcsError::InvalidParameter(format!(
            "{total} vectors cannot fill {parts} non-empty sets"
        )));
    }
    Ok((0..parts).map(|i| total / parts + usize::from(i < total % parts)).collect())
}

/// Independent random vectors; each coordinate is 1 with probability `density`.
pub fn random_family<R: Rng + ?Sized>(
    rng: &mut R,
    sizes: &[usize],
    d: usize,
    density: f64,
) -> Vec<Vec<BitVector>> {
    sizes
        .iter()
        .map(|&n| {
            (0..n)
                .map(|_| (0..d).map(|_| u8::from(rng.gen_bool(density))).collect())
                .collect()
        })
        .collect()
}

fn plant<R: Rng + ?Sized>(rng: &mut R, set: &mut [BitVector], v: BitVector, avoid: Option<usize>) -> usize {
    let slots: Vec<usize> = (0..set.len()).filter(|&x| Some(x) != avoid).collect();
    let at = *slots.choose(rng).expect("set has a free slot");
    set[at] = v;
    at
}

/// A random family with an M-OV solution planted: some `u` in one set, and
/// in every set (its own included) a vector with support disjoint from `u`.
pub fn planted_mov_family<R: Rng + ?Sized>(
    rng: &mut R,
    sizes: &[usize],
    d: usize,
    density: f64,
) -> Vec<Vec<BitVector>> {
    let mut sets = random_family(rng, sizes, d, density);
    let home = rng.gen_range(0..sets.len());
    // A lone u must be its own partner, which only the zero vector is.
    let u: BitVector = if sets[home].len() == 1 {
        vec![0; d]
    } else {
        (0..d).map(|_| u8::from(rng.gen_bool(density))).collect()
    };
    let at = plant(rng, &mut sets[home], u.clone(), None);
    for (j, set) in sets.iter_mut().enumerate() {
        let partner: BitVector = u
            .iter()
            .map(|&b| if b == 1 { 0 } else { u8::from(rng.gen_bool(density)) })
            .collect();
        if j == home {
            if set.len() > 1 {
                plant(rng, set, partner, Some(at));
            }
        } else {
            plant(rng, set, partner, None);
        }
    }
    sets
}

/// A random family of `k` sets of `nv` vectors with a pairwise orthogonal
/// choice planted: every coordinate is owned by at most one planted vector.
pub fn planted_complete_kov_family<R: Rng + ?Sized>(
    rng: &mut R,
    k: usize,
    nv: usize,
    d: usize,
    density: f64,
) -> Vec<Vec<BitVector>> {
    let mut sets = random_family(rng, &vec![nv; k], d, density);
    let owners: Vec<usize> = (0..d).map(|_| rng.gen_range(0..=k)).collect();
    for (i, set) in sets.iter_mut().enumerate() {
        let v = owners.iter().map(|&o| u8::from(o == i)).collect();
        plant(rng, set, v, None);
    }
    sets
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strings::hamming_distance;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn dh(a: &[u8], b: &[u8]) -> u32 {
        hamming_distance(a, b).unwrap()
    }

    #[test]
    fn two_string_morphisms() {
        let (mu, tau) = (|b| morphism_mu(b).unwrap(), |b| morphism_tau(b).unwrap());
        assert_eq!(dh(mu(0), tau(0)), 1);
        assert_eq!(dh(mu(1), tau(1)), 3);
        assert_eq!(dh(mu(0), mu(0)), 0);
        assert_eq!(dh(mu(0), tau(1)), 1);
        assert_eq!(dh(mu(0), mu(1)), 2);
        assert_eq!(dh(tau(0), tau(1)), 2);
        assert_eq!(dh(mu(1), tau(0)), 1);
        assert_eq!(dh(gamma(), b"1001000"), 0);
        assert!(morphism_mu(2).is_err());
    }

    #[test]
    fn indexed_morphisms() {
        assert_eq!(morphism_tau_indexed(2, 1, 0).unwrap(), b"01110100000");
        assert_eq!(gamma_indexed(2), b"10000100000");
        assert!(morphism_tau_indexed(2, 3, 0).is_err());
        // Adjacent indices have opposite parity and show the full pattern.
        for m in 2..=8 {
            for i in 1..m {
                let t = |x, b| morphism_tau_indexed(m, x, b).unwrap();
                let j = i + 1;
                assert_eq!(dh(&t(i, 0), &t(j, 0)), 3);
                assert_eq!(dh(&t(i, 1), &t(j, 1)), 5);
                assert_eq!(dh(&t(i, 0), &t(i, 1)), 2);
                assert_eq!(dh(&t(j, 0), &t(j, 1)), 2);
                assert_eq!(dh(&t(i, 1), &t(j, 0)), 3);
                assert_eq!(dh(&t(i, 0), &t(j, 1)), 3);
            }
        }
    }

    #[test]
    fn tail_occurs_twice() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for m in 2..=6 {
            let mut tail = vec![b'1'];
            tail.extend(std::iter::repeat_n(b'0', m + 3));
            for _ in 0..50 {
                let mut s = tail.clone();
                s.extend((0..m + 3).map(|_| if rng.gen_bool(0.5) { b'1' } else { b'0' }));
                s.extend_from_slice(&tail);
                assert_eq!(s.windows(tail.len()).filter(|w| *w == &tail[..]).count(), 2);
            }
        }
    }

    #[test]
    fn lemma_nine_layout() {
        let inst = build_rklcs_instance(&[vec![vec![0]], vec![vec![1]]], 1).unwrap();
        assert_eq!(inst.strings[1], b"100100000110001001000");
        assert_eq!(inst.strings[0].len(), 7 * (2 * 2 + 1));
        assert_eq!((inst.k, inst.lower, inst.upper), (1, 21, 21));
        assert_eq!(inst.string_set().unwrap().len(), 3);
        assert!(inst.to_lines().ends_with('\n'));
        let fam = planted_mov_family(&mut ChaCha8Rng::seed_from_u64(1), &[1, 1], 2, 0.5);
        let inst = build_rklcs_instance(&fam, 1).unwrap();
        assert_eq!((inst.k, inst.lower), (2, 42));
        assert!(build_rklcs_instance(&[vec![vec![0, 1]], vec![vec![1]]], 1).is_err());
        assert!(build_rklcs_instance(&[vec![vec![0]]], 0).is_err());
    }

    #[test]
    fn lemma_twelve_layout() {
        let fam = vec![vec![vec![1u8], vec![0]], vec![vec![0u8], vec![1]]];
        let inst = build_rklcss_instance(&fam, 1).unwrap();
        assert_eq!((inst.k, inst.lower, inst.upper), (3, 33, 33));
        for s in &inst.strings {
            assert_eq!(s.len(), (2 * 2 + 7) * (2 * 2 + 1));
        }
        assert!(build_rklcss_instance(&[vec![vec![1u8]], vec![vec![0u8], vec![1]]], 1).is_err());
    }

    #[test]
    fn planting_works() {
        use crate::oracle::{has_complete_k_ov, has_m_ov, has_m_ov_inclusive};
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let fam = planted_mov_family(&mut rng, &[1, 2, 3], 3, 0.7);
            assert!(has_m_ov_inclusive(&fam).unwrap().is_some());
            assert!(has_m_ov(&fam).unwrap().is_some());
            let fam = planted_complete_kov_family(&mut rng, 3, 2, 4, 0.7);
            assert!(has_complete_k_ov(&fam).unwrap().is_some());
        }
        assert_eq!(even_sizes(5, 2).unwrap(), [3, 2]);
        assert!(even_sizes(1, 2).is_err());
    }
}
