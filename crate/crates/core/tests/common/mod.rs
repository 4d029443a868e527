//! Test-side oracles. Everything here is computed on machine integers with
//! textbook methods, independently of the library's own linear algebra.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use posetcox::{IntMatrix, IntPolynomial, Poset};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;

pub type Mat = Vec<Vec<i64>>;

pub fn identity(n: usize) -> Mat {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

pub fn mul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let m = b[0].len();
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| (0..b.len()).map(|k| a[i][k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

pub fn transpose(a: &Mat) -> Mat {
    (0..a[0].len())
        .map(|j| a.iter().map(|r| r[j]).collect())
        .collect()
}

pub fn sub(a: &Mat, b: &Mat) -> Mat {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.iter().zip(y).map(|(p, q)| p - q).collect())
        .collect()
}

pub fn is_zero(a: &Mat) -> bool {
    a.iter().flatten().all(|&x| x == 0)
}

pub fn to_mat(m: &IntMatrix) -> Mat {
    m.to_rows_i64().expect("entries fit in i64")
}

/// Fraction-free Bareiss elimination with row pivoting.
pub fn det(a: &Mat) -> i128 {
    let n = a.len();
    if n == 0 {
        return 1;
    }
    let mut m: Vec<Vec<i128>> = a
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&r| m[r][k] != 0) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

/// Rank over the rationals by fraction-free elimination.
pub fn rank(a: &Mat) -> usize {
    let mut m: Vec<Vec<i128>> = a
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, p);
        for i in 0..rows {
            if i != r && m[i][c] != 0 {
                let (f, g) = (m[r][c], m[i][c]);
                for j in 0..cols {
                    m[i][j] = m[i][j] * f - m[r][j] * g;
                }
                let content = m[i].iter().fold(0i128, |acc, &x| gcd(acc, x.abs()));
                if content > 1 {
                    m[i].iter_mut().for_each(|x| *x /= content);
                }
            }
        }
        r += 1;
    }
    r
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd_u64(b, a % b)
    }
}

/// Sylvester's criterion for semidefiniteness: every principal minor is
/// non-negative.
pub fn is_psd(a: &Mat) -> bool {
    let n = a.len();
    (1u32..1 << n).all(|mask| {
        let idx: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        let sub: Mat = idx
            .iter()
            .map(|&i| idx.iter().map(|&j| a[i][j]).collect())
            .collect();
        det(&sub) >= 0
    })
}

/// All leading principal minors positive.
pub fn is_positive_definite(a: &Mat) -> bool {
    (1..=a.len()).all(|k| {
        let sub: Mat = a[..k].iter().map(|r| r[..k].to_vec()).collect();
        det(&sub) > 0
    })
}

/// `C[i][j] = 1` iff `i ⪯ j`, built from the order relation directly.
pub fn incidence(p: &Poset) -> Mat {
    let n = p.n();
    (1..=n)
        .map(|i| (1..=n).map(|j| i64::from(p.leq(i, j))).collect())
        .collect()
}

/// The Möbius function of the poset, which is the inverse of `C`.
pub fn mobius(p: &Poset) -> Mat {
    let n = p.n();
    let mut mu = vec![vec![0i64; n]; n];
    // Process pairs by increasing interval size so sub-intervals are known.
    let size = |i: usize, j: usize| (1..=n).filter(|&k| p.leq(i, k) && p.leq(k, j)).count();
    let mut pairs: Vec<(usize, usize)> = (1..=n)
        .flat_map(|i| (1..=n).map(move |j| (i, j)))
        .filter(|&(i, j)| p.leq(i, j))
        .collect();
    pairs.sort_by_key(|&(i, j)| size(i, j));
    for (i, j) in pairs {
        mu[i - 1][j - 1] = if i == j {
            1
        } else {
            -(1..=n)
                .filter(|&k| k != j && p.leq(i, k) && p.leq(k, j))
                .map(|k| mu[i - 1][k - 1])
                .sum::<i64>()
        };
    }
    mu
}

/// `Cox = −C · (C⁻¹)ᵀ`.
pub fn coxeter(p: &Poset) -> Mat {
    let c = incidence(p);
    let m = mul(&c, &transpose(&mobius(p)));
    m.into_iter()
        .map(|r| r.into_iter().map(|x| -x).collect())
        .collect()
}

pub fn gram2(p: &Poset) -> Mat {
    let c = incidence(p);
    let ct = transpose(&c);
    c.iter()
        .zip(&ct)
        .map(|(x, y)| x.iter().zip(y).map(|(a, b)| a + b).collect())
        .collect()
}

/// Characteristic polynomial `det(tE − A)` by Faddeev–LeVerrier, low to
/// high coefficients.
pub fn char_poly(a: &Mat) -> Vec<i64> {
    let n = a.len();
    let a128: Vec<Vec<i128>> = a
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut coeffs = vec![0i128; n + 1];
    coeffs[n] = 1;
    let mut m = vec![vec![0i128; n]; n];
    for k in 1..=n {
        // M_k = A·M_{k−1} + c_{n−k+1}·E
        let mut next = vec![vec![0i128; n]; n];
        for i in 0..n {
            for j in 0..n {
                next[i][j] = (0..n).map(|l| a128[i][l] * m[l][j]).sum::<i128>();
            }
            next[i][i] += coeffs[n - k + 1];
        }
        m = next;
        let trace: i128 = (0..n)
            .map(|i| (0..n).map(|l| a128[i][l] * m[l][i]).sum::<i128>())
            .sum();
        assert_eq!(
            trace % k as i128,
            0,
            "Faddeev–LeVerrier division must be exact"
        );
        coeffs[n - k] = -trace / k as i128;
    }
    coeffs
        .into_iter()
        .map(|c| i64::try_from(c).expect("coefficient fits"))
        .collect()
}

pub fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// `1 + t + … + t^d`.
pub fn geometric(d: usize) -> Vec<i64> {
    vec![1; d + 1]
}

pub fn poly_i64(p: &IntPolynomial) -> Vec<i64> {
    p.coeffs()
        .iter()
        .map(|c| i64::try_from(c.clone()).expect("coefficient fits"))
        .collect()
}

/// Cover pairs computed from the order relation, 1-based.
pub fn covers(p: &Poset) -> Vec<(usize, usize)> {
    let n = p.n();
    let mut out = Vec::new();
    for a in 1..=n {
        for b in 1..=n {
            if a != b
                && p.leq(a, b)
                && !(1..=n).any(|c| c != a && c != b && p.leq(a, c) && p.leq(c, b))
            {
                out.push((a, b));
            }
        }
    }
    out
}

pub fn connected(p: &Poset) -> bool {
    let n = p.n();
    let mut seen = vec![false; n + 1];
    let mut stack = vec![1];
    seen[1] = true;
    while let Some(a) = stack.pop() {
        for b in 1..=n {
            if !seen[b] && (p.leq(a, b) || p.leq(b, a)) {
                seen[b] = true;
                stack.push(b);
            }
        }
    }
    seen[1..].iter().all(|&s| s)
}

/// Connected with a Hasse digraph whose underlying graph is a path.
pub fn hasse_is_path(p: &Poset) -> bool {
    let n = p.n();
    let cv = covers(p);
    let mut deg = vec![0; n + 1];
    for &(a, b) in &cv {
        deg[a] += 1;
        deg[b] += 1;
    }
    connected(p) && cv.len() == n - 1 && deg[1..].iter().all(|&d| d <= 2)
}

/// Orientation words: `true` means the arrow points from the element
/// visited earlier to the one visited next.
pub type Word = Vec<bool>;

fn word_from_bits(bits: u64, len: usize) -> Word {
    (0..len).map(|i| bits >> i & 1 == 1).collect()
}

fn reverse_flip(w: &[bool]) -> Word {
    w.iter().rev().map(|&a| !a).collect()
}

pub fn path_classes(n: usize) -> Vec<Word> {
    let len = n - 1;
    let mut out = BTreeSet::new();
    for bits in 0..1u64 << len {
        let w = word_from_bits(bits, len);
        let r = reverse_flip(&w);
        out.insert(w.min(r));
    }
    out.into_iter().collect()
}

fn rotations(w: &[bool]) -> impl Iterator<Item = Word> + '_ {
    (0..w.len()).map(move |k| w[k..].iter().chain(&w[..k]).copied().collect())
}

/// Principal cycle classes, keyed by the larger direction count.
pub fn cycle_classes(n: usize) -> BTreeMap<usize, Vec<Word>> {
    let mut seen = BTreeSet::new();
    for bits in 0..1u64 << n {
        let w = word_from_bits(bits, n);
        let r = reverse_flip(&w);
        let canon = rotations(&w)
            .chain(rotations(&r).collect::<Vec<_>>())
            .min()
            .unwrap();
        seen.insert(canon);
    }
    let mut out: BTreeMap<usize, Vec<Word>> = BTreeMap::new();
    for w in seen {
        // Element i + 1 is a sink when arrow i points forward into it and
        // arrow i + 1 points back into it.
        let sinks = (0..n).filter(|&i| w[i] && !w[(i + 1) % n]).count();
        if sinks < 2 {
            continue;
        }
        let forward = w.iter().filter(|&&a| a).count();
        out.entry(forward.max(n - forward)).or_default().push(w);
    }
    out
}

pub fn path_poset(w: &[bool]) -> Poset {
    let n = w.len() + 1;
    let pairs: Vec<(usize, usize)> = w
        .iter()
        .enumerate()
        .map(|(i, &f)| if f { (i + 1, i + 2) } else { (i + 2, i + 1) })
        .collect();
    Poset::new(n, &pairs).expect("path words give posets")
}

pub fn cycle_poset(w: &[bool]) -> Poset {
    let n = w.len();
    let pairs: Vec<(usize, usize)> = w
        .iter()
        .enumerate()
        .map(|(i, &f)| {
            let (x, y) = (i + 1, (i + 1) % n + 1);
            if f {
                (x, y)
            } else {
                (y, x)
            }
        })
        .collect();
    Poset::new(n, &pairs).expect("words with two sinks are acyclic")
}

/// Element `i` becomes `perm[i − 1]`.
pub fn relabel(p: &Poset, perm: &[usize]) -> Poset {
    let pairs: Vec<(usize, usize)> = covers(p)
        .into_iter()
        .map(|(a, b)| (perm[a - 1], perm[b - 1]))
        .collect();
    Poset::new(p.n(), &pairs).expect("relabelling keeps a poset")
}

/// Deterministic pseudo-random permutation of `1..=n` from a seed.
pub fn shuffled(n: usize, seed: u64) -> Vec<usize> {
    let mut perm: Vec<usize> = (1..=n).collect();
    perm.shuffle(&mut StdRng::seed_from_u64(seed));
    perm
}

/// `B` has determinant ±1 and `Bᵀ · from · B = to`.
pub fn is_congruence(b: &Mat, from: &Mat, to: &Mat) -> bool {
    det(b).abs() == 1 && mul(&mul(&transpose(b), from), b) == *to
}

pub struct CorpusEntry {
    pub poset: Poset,
    /// `None` for paths, the cycle index for principal cycles.
    pub cycle_index: Option<usize>,
}

/// Every connected non-negative type A poset on `n` elements up to
/// isomorphism, each with a scrambled labelling.
pub fn corpus(n: usize) -> Vec<CorpusEntry> {
    let mut out = Vec::new();
    for (i, w) in path_classes(n).into_iter().enumerate() {
        let p = relabel(&path_poset(&w), &shuffled(n, (n * 1000 + i) as u64));
        out.push(CorpusEntry {
            poset: p,
            cycle_index: None,
        });
    }
    if n >= 3 {
        for (index, words) in cycle_classes(n) {
            for (i, w) in words.into_iter().enumerate() {
                let p = relabel(
                    &cycle_poset(&w),
                    &shuffled(n, (n * 7919 + index * 31 + i) as u64),
                );
                out.push(CorpusEntry {
                    poset: p,
                    cycle_index: Some(index),
                });
            }
        }
    }
    out
}
