//! Counting formulas for type A posets and the brute-force oracles that
//! check them.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::IntPolynomial;
use crate::poset::{canonical_cycle_word, canonical_path_word, Arrow, Poset};
use crate::serde_int;

/// Default size limit of the path and cycle oracles.
pub const ORACLE_BOUND: usize = 14;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerateError {
    #[error("cycle index {p} is outside {lo}..={hi} for n = {n}")]
    InvalidRange {
        n: usize,
        p: usize,
        lo: usize,
        hi: usize,
    },
    #[error("n = {n} is outside the supported range {lo}..={hi}")]
    BoundExceeded { n: usize, lo: usize, hi: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusRow {
    /// Cycle index; `None` for the positive row.
    pub p: Option<usize>,
    pub polynomial: IntPolynomial,
    #[serde(with = "serde_int::single")]
    pub count: BigInt,
}

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|&d| n.is_multiple_of(d)).collect()
}

fn totient(n: u64) -> u64 {
    (1..=n).filter(|k| k.gcd(&n) == 1).count() as u64
}

fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

fn pow2(e: u64) -> BigInt {
    BigInt::one() << e
}

/// Division that must be exact.
fn exact_div(num: BigInt, den: u64) -> BigInt {
    let (q, r) = num.div_rem(&BigInt::from(den));
    assert!(r.is_zero(), "totient sum is not divisible by {den}");
    q
}

/// Number of non-isomorphic positive posets of type A with `n` elements.
pub fn count_positive(n: usize) -> BigInt {
    let n = n as u64;
    match n {
        0 => BigInt::zero(),
        1 => BigInt::one(),
        _ if n.is_multiple_of(2) => pow2(n - 2),
        _ => pow2((n - 3) / 2) + pow2(n - 2),
    }
}

/// Binary necklaces of length `n` with `p` black beads, up to rotation.
pub fn necklace_count(p: usize, n: usize) -> BigInt {
    assert!(n >= 1 && p <= n, "necklace_count needs 0 <= p <= n, n >= 1");
    let (p, n) = (p as u64, n as u64);
    let g = n.gcd(&p);
    let sum: BigInt = divisors(g)
        .into_iter()
        .map(|d| BigInt::from(totient(d)) * binomial(n / d, p / d))
        .sum();
    exact_div(sum, n)
}

/// Coefficients of the two-colour necklace generating function for
/// `p = 0..=n` black beads, by expanding the cycle index polynomial.
pub fn necklace_genfunc(n: usize) -> Vec<BigInt> {
    assert!(n >= 1, "necklace_genfunc needs n >= 1");
    let mut total = IntPolynomial::zero();
    for d in divisors(n as u64) {
        let d_us = d as usize;
        let base = &IntPolynomial::one() + &IntPolynomial::monomial(BigInt::one(), d_us);
        let mut term = IntPolynomial::one();
        for _ in 0..n / d_us {
            term = &term * &base;
        }
        let phi = IntPolynomial::monomial(BigInt::from(totient(d)), 0);
        total = &total + &(&phi * &term);
    }
    (0..=n)
        .map(|p| exact_div(total.coeff(p), n as u64))
        .collect()
}

/// Principal-type cycles with cycle index `p`, counted as necklaces (one
/// of which is the single-sink cycle that is not a principal poset).
pub fn count_principal_cycles(n: usize, p: usize) -> Result<BigInt, EnumerateError> {
    let lo = n.div_ceil(2);
    let hi = n.saturating_sub(2);
    if n < 4 || p < lo || p > hi {
        return Err(EnumerateError::InvalidRange { n, p, lo, hi });
    }
    if 2 * p != n {
        return Ok(necklace_count(p, n));
    }
    let n64 = n as u64;
    let half = n64 / 2;
    let sum: BigInt = divisors(half)
        .into_iter()
        .map(|d| BigInt::from(totient(d)) * binomial(n64 / d, half / d))
        .sum();
    Ok(exact_div(sum, 2 * n64) + pow2(half - 2))
}

/// Number of non-isomorphic connected non-negative posets of type A.
pub fn count_total(n: usize) -> BigInt {
    if n <= 2 {
        return BigInt::from(u8::from(n > 0));
    }
    let n64 = n as u64;
    let sum: BigInt = divisors(n64)
        .into_iter()
        .map(|d| pow2(n64 / d) * BigInt::from(totient(d)))
        .sum();
    let extra = if n64 % 2 == 1 {
        pow2((n64 - 3) / 2)
    } else {
        pow2(n64 / 2 - 2)
    };
    pow2(n64 - 2) + exact_div(sum, 2 * n64) + extra - BigInt::from((n64 + 2) / 2)
}

/// One positive row plus one principal row per cycle index.
pub fn census(n: usize) -> Result<Vec<CensusRow>, EnumerateError> {
    if n < 2 {
        return Err(EnumerateError::BoundExceeded {
            n,
            lo: 2,
            hi: usize::MAX,
        });
    }
    let mut rows = vec![CensusRow {
        p: None,
        polynomial: IntPolynomial::geometric(n),
        count: count_positive(n),
    }];
    for p in n.div_ceil(2)..=n.saturating_sub(2) {
        rows.push(CensusRow {
            p: Some(p),
            polynomial: IntPolynomial::principal_type(n, p),
            count: count_principal_cycles(n, p)? - 1,
        });
    }
    Ok(rows)
}

fn arrows_from_bits(bits: u64, len: usize) -> Vec<Arrow> {
    (0..len)
        .map(|i| {
            if bits >> i & 1 == 1 {
                Arrow::F
            } else {
                Arrow::B
            }
        })
        .collect()
}

/// Poset on `1..=n` whose Hasse diagram follows `word` along `1, 2, …`;
/// a cycle word has one more letter, closing `n` back to 1.
fn poset_from_word(n: usize, word: &[Arrow]) -> Option<Poset> {
    let pairs: Vec<(usize, usize)> = word
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let x = i + 1;
            let y = if i + 1 == n { 1 } else { i + 2 };
            if *a == Arrow::F {
                (x, y)
            } else {
                (y, x)
            }
        })
        .collect();
    Poset::new(n, &pairs).ok()
}

fn check_oracle_range(n: usize, lo: usize, hi: usize) -> Result<(), EnumerateError> {
    if n < lo || n > hi {
        Err(EnumerateError::BoundExceeded { n, lo, hi })
    } else {
        Ok(())
    }
}

/// All oriented-path posets on `n` elements, one per isomorphism class.
pub fn oracle_enumerate_paths(n: usize) -> Result<Vec<Poset>, EnumerateError> {
    oracle_enumerate_paths_bounded(n, ORACLE_BOUND)
}

pub fn oracle_enumerate_paths_bounded(
    n: usize,
    bound: usize,
) -> Result<Vec<Poset>, EnumerateError> {
    check_oracle_range(n, 1, bound)?;
    let len = n - 1;
    let mut out = Vec::new();
    for bits in 0..1u64 << len {
        let word = arrows_from_bits(bits, len);
        if canonical_path_word(&word) == word {
            out.push(poset_from_word(n, &word).expect("path words give posets"));
        }
    }
    Ok(out)
}

/// Principal posets of type A on `n` elements up to isomorphism, keyed by
/// cycle index.
pub fn oracle_enumerate_principal(n: usize) -> Result<BTreeMap<usize, Vec<Poset>>, EnumerateError> {
    oracle_enumerate_principal_bounded(n, ORACLE_BOUND)
}

pub fn oracle_enumerate_principal_bounded(
    n: usize,
    bound: usize,
) -> Result<BTreeMap<usize, Vec<Poset>>, EnumerateError> {
    check_oracle_range(n, 4, bound)?;
    let mut out: BTreeMap<usize, Vec<Poset>> = BTreeMap::new();
    for bits in 0..1u64 << n {
        let word = arrows_from_bits(bits, n);
        if canonical_cycle_word(&word) != word {
            continue;
        }
        // Vertex i+1 is a sink when the arrow before it points in and the
        // arrow after it points back.
        let sinks = (0..n)
            .filter(|&i| word[i] == Arrow::F && word[(i + 1) % n] == Arrow::B)
            .count();
        if sinks < 2 {
            continue;
        }
        let forward = word.iter().filter(|&&a| a == Arrow::F).count();
        let index = forward.max(n - forward);
        out.entry(index)
            .or_default()
            .push(poset_from_word(n, &word).expect("cycles with two sinks give posets"));
    }
    Ok(out)
}

/// Poset relation as bit rows: bit `j` of `rows[i]` is set iff `i ⪯ j`.
type Rows = Vec<u16>;

fn rows_of(p: &Poset) -> Rows {
    let n = p.n();
    (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| p.leq0(i, j))
                .fold(0u16, |acc, j| acc | 1 << j)
        })
        .collect()
}

/// Isomorphism-invariant colour classes by iterated refinement on the
/// up-sets and down-sets.
fn refined_classes(rows: &Rows) -> Vec<usize> {
    let n = rows.len();
    let below = |x: usize| (0..n).filter(move |&y| y != x && rows[y] >> x & 1 == 1);
    let above = |x: usize| (0..n).filter(move |&y| y != x && rows[x] >> y & 1 == 1);
    let mut colour: Vec<usize> = vec![0; n];
    loop {
        let sig: Vec<(usize, Vec<usize>, Vec<usize>)> = (0..n)
            .map(|x| {
                let mut b: Vec<usize> = below(x).map(|y| colour[y]).collect();
                let mut a: Vec<usize> = above(x).map(|y| colour[y]).collect();
                b.sort_unstable();
                a.sort_unstable();
                (colour[x], b, a)
            })
            .collect();
        let distinct: BTreeSet<_> = sig.iter().cloned().collect();
        let rank: BTreeMap<_, usize> = distinct
            .into_iter()
            .enumerate()
            .map(|(i, s)| (s, i))
            .collect();
        let next: Vec<usize> = sig.iter().map(|s| rank[s]).collect();
        let before = colour.iter().collect::<BTreeSet<_>>().len();
        let after = next.iter().collect::<BTreeSet<_>>().len();
        colour = next;
        if after == before {
            return colour;
        }
    }
}

/// Lexicographically least relation matrix, packed into a `u64`, over all
/// relabellings that respect the refined colour classes.
fn canonical_code(rows: &Rows) -> u64 {
    let n = rows.len();
    let colour = refined_classes(rows);
    let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (x, &c) in colour.iter().enumerate() {
        classes.entry(c).or_default().push(x);
    }
    let blocks: Vec<Vec<usize>> = classes.into_values().collect();
    let mut best = u64::MAX;
    let mut order: Vec<usize> = Vec::with_capacity(n);
    fn permute_blocks(blocks: &[Vec<usize>], rows: &Rows, order: &mut Vec<usize>, best: &mut u64) {
        let Some((first, rest)) = blocks.split_first() else {
            // order[new] = old
            let n = order.len();
            let mut code = 0u64;
            for i in 0..n {
                for j in 0..n {
                    code = code << 1 | u64::from(rows[order[i]] >> order[j] & 1);
                }
            }
            *best = (*best).min(code);
            return;
        };
        let mut items = first.clone();
        permutations(&mut items, 0, &mut |perm| {
            let mark = order.len();
            order.extend_from_slice(perm);
            permute_blocks(rest, rows, order, best);
            order.truncate(mark);
        });
    }
    permute_blocks(&blocks, rows, &mut order, &mut best);
    best
}

fn permutations(items: &mut Vec<usize>, k: usize, visit: &mut dyn FnMut(&[usize])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permutations(items, k + 1, visit);
        items.swap(k, i);
    }
}

/// Every poset on `n` elements up to isomorphism. `n ≤ 7`, or `n = 8` when
/// `allow_n8` is set.
pub fn oracle_enumerate_all_posets(n: usize, allow_n8: bool) -> Result<Vec<Poset>, EnumerateError> {
    let hi = if allow_n8 { 8 } else { 7 };
    check_oracle_range(n, 1, hi)?;
    let mut level: BTreeMap<u64, Rows> = BTreeMap::new();
    level.insert(canonical_code(&vec![1]), vec![1]);
    for m in 2..=n {
        let mut next: BTreeMap<u64, Rows> = BTreeMap::new();
        for rows in level.values() {
            // Add a new maximal element above every down-set.
            for set in 0..1u16 << (m - 1) {
                let down_closed = (0..m - 1)
                    .filter(|&x| set >> x & 1 == 1)
                    .all(|x| (0..m - 1).all(|y| rows[y] >> x & 1 == 0 || set >> y & 1 == 1));
                if !down_closed {
                    continue;
                }
                let new = m - 1;
                let mut ext: Rows = rows.clone();
                for (x, row) in ext.iter_mut().enumerate() {
                    if set >> x & 1 == 1 {
                        *row |= 1 << new;
                    }
                }
                ext.push(1 << new);
                next.entry(canonical_code(&ext)).or_insert(ext);
            }
        }
        level = next;
    }
    Ok(level
        .into_values()
        .map(|rows| {
            let leq = rows
                .iter()
                .map(|r| (0..n).map(|j| r >> j & 1 == 1).collect())
                .collect();
            Poset::from_closed0(leq).expect("extensions by a maximal element are posets")
        })
        .collect())
}

/// Canonical code of an arbitrary small poset, comparable with the codes
/// used to deduplicate [`oracle_enumerate_all_posets`].
pub fn canonical_form(p: &Poset) -> Option<u64> {
    (p.n() <= 8).then(|| canonical_code(&rows_of(p)))
}
