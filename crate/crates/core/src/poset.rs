//! Finite posets on `{1..n}` and their Hasse digraphs.
//!
//! The public API speaks 1-based labels. Internally everything is 0-based;
//! the `*0` helpers expose that view to the rest of the crate.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::IntMatrix;

/// Default element bound for the generic isomorphism search.
pub const ISOMORPHISM_BOUND: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PosetError {
    #[error("a poset needs at least one element")]
    Empty,
    #[error("element {element} is outside 1..={n}")]
    OutOfRange { element: usize, n: usize },
    #[error("relations are cyclic: {a} and {b} would precede each other")]
    CycleDetected { a: usize, b: usize },
    #[error("poset is not connected")]
    Disconnected,
    #[error("generic isomorphism search is limited to {bound} elements, got {n}")]
    TooLarge { n: usize, bound: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poset {
    n: usize,
    leq: Vec<Vec<bool>>,
    covers: Vec<(usize, usize)>,
}

/// Minimal and maximal elements, 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Extremes {
    pub minimal: BTreeSet<usize>,
    pub maximal: BTreeSet<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ShapeKind {
    OrientedPath,
    OrientedCycle,
    Other,
}

/// Direction of a Hasse arrow relative to a traversal: `F` when the arrow
/// points from the current element to the next one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Arrow {
    F,
    B,
}

impl Arrow {
    pub fn flipped(self) -> Arrow {
        match self {
            Arrow::F => Arrow::B,
            Arrow::B => Arrow::F,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HasseShape {
    pub kind: ShapeKind,
    /// Present for paths (length n−1) and cycles (length n).
    pub orientation_word: Option<Vec<Arrow>>,
    /// The canonical traversal order, 1-based, for paths and cycles.
    pub traversal: Option<Vec<usize>>,
}

pub fn word_to_string(word: &[Arrow]) -> String {
    word.iter()
        .map(|a| if *a == Arrow::F { 'F' } else { 'B' })
        .collect()
}

/// Representative of a path word under reading the path backwards.
pub fn canonical_path_word(word: &[Arrow]) -> Vec<Arrow> {
    let rev: Vec<Arrow> = word.iter().rev().map(|a| a.flipped()).collect();
    rev.min(word.to_vec())
}

/// Representative of a cycle word under rotation and reading backwards.
pub fn canonical_cycle_word(word: &[Arrow]) -> Vec<Arrow> {
    let rev: Vec<Arrow> = word.iter().rev().map(|a| a.flipped()).collect();
    let n = word.len();
    let mut best = word.to_vec();
    for w in [word, rev.as_slice()] {
        for s in 0..n {
            let rot: Vec<Arrow> = w[s..].iter().chain(&w[..s]).copied().collect();
            if rot < best {
                best = rot;
            }
        }
    }
    best
}

impl Poset {
    /// Closes `relations` (1-based pairs `a ⪯ b`) reflexively and
    /// transitively and derives the cover arrows.
    pub fn new(n: usize, relations: &[(usize, usize)]) -> Result<Poset, PosetError> {
        if n == 0 {
            return Err(PosetError::Empty);
        }
        let mut pairs = Vec::with_capacity(relations.len());
        for &(a, b) in relations {
            for x in [a, b] {
                if x == 0 || x > n {
                    return Err(PosetError::OutOfRange { element: x, n });
                }
            }
            pairs.push((a - 1, b - 1));
        }
        Self::from_pairs0(n, &pairs)
    }

    /// Same as [`Poset::new`] with 0-based pairs.
    pub(crate) fn from_pairs0(n: usize, pairs: &[(usize, usize)]) -> Result<Poset, PosetError> {
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in pairs {
            leq[a][b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if !leq[i][k] {
                    continue;
                }
                for j in 0..n {
                    if leq[k][j] {
                        leq[i][j] = true;
                    }
                }
            }
        }
        Self::from_closed0(leq)
    }

    /// From an already reflexive and transitive relation matrix.
    pub(crate) fn from_closed0(leq: Vec<Vec<bool>>) -> Result<Poset, PosetError> {
        let n = leq.len();
        for i in 0..n {
            for j in i + 1..n {
                if leq[i][j] && leq[j][i] {
                    return Err(PosetError::CycleDetected { a: i + 1, b: j + 1 });
                }
            }
        }
        let mut covers = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a != b
                    && leq[a][b]
                    && !(0..n).any(|c| c != a && c != b && leq[a][c] && leq[c][b])
                {
                    covers.push((a, b));
                }
            }
        }
        Ok(Poset { n, leq, covers })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `a ⪯ b`, 1-based.
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a - 1][b - 1]
    }

    pub(crate) fn leq0(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    /// All strict relations `a ≺ b`, 1-based, sorted.
    pub fn relations(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.n {
            for b in 0..self.n {
                if a != b && self.leq[a][b] {
                    out.push((a + 1, b + 1));
                }
            }
        }
        out
    }

    /// Cover arrows `a → b` (b covers a), 1-based, sorted.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        self.covers.iter().map(|&(a, b)| (a + 1, b + 1)).collect()
    }

    pub(crate) fn covers0(&self) -> &[(usize, usize)] {
        &self.covers
    }

    /// The incidence matrix: entry `(i, j)` is 1 iff `i ⪯ j`.
    pub fn incidence_matrix(&self) -> IntMatrix {
        IntMatrix::from_fn(self.n, |i, j| {
            if self.leq[i][j] {
                BigInt::one()
            } else {
                BigInt::zero()
            }
        })
    }

    pub(crate) fn is_minimal0(&self, a: usize) -> bool {
        (0..self.n).all(|b| b == a || !self.leq[b][a])
    }

    pub(crate) fn is_maximal0(&self, a: usize) -> bool {
        (0..self.n).all(|b| b == a || !self.leq[a][b])
    }

    pub fn extremes(&self) -> Extremes {
        Extremes {
            minimal: (0..self.n)
                .filter(|&a| self.is_minimal0(a))
                .map(|a| a + 1)
                .collect(),
            maximal: (0..self.n)
                .filter(|&a| self.is_maximal0(a))
                .map(|a| a + 1)
                .collect(),
        }
    }

    pub(crate) fn check_element(&self, a: usize) -> Result<usize, PosetError> {
        if a == 0 || a > self.n {
            Err(PosetError::OutOfRange {
                element: a,
                n: self.n,
            })
        } else {
            Ok(a - 1)
        }
    }

    /// Elements covering `a` or covered by `a`, 1-based.
    pub fn neighbourhood(&self, a: usize) -> Result<BTreeSet<usize>, PosetError> {
        let a0 = self.check_element(a)?;
        Ok(self.neighbours0(a0).into_iter().map(|x| x + 1).collect())
    }

    pub(crate) fn neighbours0(&self, a: usize) -> BTreeSet<usize> {
        self.covers
            .iter()
            .filter_map(|&(x, y)| {
                if x == a {
                    Some(y)
                } else if y == a {
                    Some(x)
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for w in self.neighbours0(v) {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Shape of the underlying Hasse graph, with the canonical traversal.
    pub fn hasse_shape(&self) -> Result<HasseShape, PosetError> {
        if !self.is_connected() {
            return Err(PosetError::Disconnected);
        }
        let n = self.n;
        let nbrs: Vec<BTreeSet<usize>> = (0..n).map(|a| self.neighbours0(a)).collect();
        let degrees: Vec<usize> = nbrs.iter().map(BTreeSet::len).collect();
        let edges = self.covers.len();
        let walk = |start: usize, first: usize| -> Vec<usize> {
            let mut order = vec![start];
            let mut prev = start;
            let mut cur = first;
            while cur != start {
                order.push(cur);
                let Some(&next) = nbrs[cur].iter().find(|&&w| w != prev) else {
                    break;
                };
                prev = cur;
                cur = next;
            }
            order
        };
        let word_of = |order: &[usize], closed: bool| -> Vec<Arrow> {
            let steps = if closed { order.len() } else { order.len() - 1 };
            (0..steps)
                .map(|i| {
                    let a = order[i];
                    let b = order[(i + 1) % order.len()];
                    if self.leq[a][b] {
                        Arrow::F
                    } else {
                        Arrow::B
                    }
                })
                .collect()
        };
        let one_based = |order: Vec<usize>| order.into_iter().map(|x| x + 1).collect();
        if edges == n - 1 && degrees.iter().all(|&d| d <= 2) {
            let order = if n == 1 {
                vec![0]
            } else {
                let start = (0..n)
                    .find(|&a| degrees[a] == 1)
                    .expect("a path has an endpoint");
                let first = *nbrs[start].iter().next().expect("endpoint has a neighbour");
                walk(start, first)
            };
            let word = word_of(&order, false);
            return Ok(HasseShape {
                kind: ShapeKind::OrientedPath,
                orientation_word: Some(word),
                traversal: Some(one_based(order)),
            });
        }
        if edges == n && degrees.iter().all(|&d| d == 2) {
            let first = *nbrs[0].iter().next().expect("cycle vertex has neighbours");
            let order = walk(0, first);
            let word = word_of(&order, true);
            return Ok(HasseShape {
                kind: ShapeKind::OrientedCycle,
                orientation_word: Some(word),
                traversal: Some(one_based(order)),
            });
        }
        Ok(HasseShape {
            kind: ShapeKind::Other,
            orientation_word: None,
            traversal: None,
        })
    }

    /// The poset with element `i` renamed to `perm[i-1]` (1-based `perm`).
    pub fn relabel(&self, perm: &[usize]) -> Result<Poset, PosetError> {
        let n = self.n;
        let mut seen = vec![false; n];
        for &x in perm {
            if x == 0 || x > n || seen[x - 1] {
                return Err(PosetError::OutOfRange { element: x, n });
            }
            seen[x - 1] = true;
        }
        if perm.len() != n {
            return Err(PosetError::OutOfRange {
                element: perm.len(),
                n,
            });
        }
        let mut leq = vec![vec![false; n]; n];
        for a in 0..n {
            for b in 0..n {
                leq[perm[a] - 1][perm[b] - 1] = self.leq[a][b];
            }
        }
        Self::from_closed0(leq)
    }

    /// The order-dual poset.
    pub fn dual(&self) -> Poset {
        let n = self.n;
        let leq = (0..n)
            .map(|i| (0..n).map(|j| self.leq[j][i]).collect())
            .collect();
        Self::from_closed0(leq).expect("dual of a poset is a poset")
    }

    /// Text format: the element count, then one cover `a b` per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for (a, b) in self.covers() {
            out.push_str(&format!("{a} {b}\n"));
        }
        out
    }

    /// Parses the text format. `#` starts a comment; blank lines are
    /// ignored; pairs may be any generating set of relations.
    pub fn parse_text(text: &str) -> Result<Poset, PosetError> {
        let mut n = None;
        let mut pairs = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let fields: Vec<&str> = content.split_whitespace().collect();
            let parse = |s: &str| {
                s.parse::<usize>().map_err(|_| PosetError::Parse {
                    line,
                    message: format!("expected a non-negative integer, found `{s}`"),
                })
            };
            match (n, fields.as_slice()) {
                (None, [count]) => n = Some(parse(count)?),
                (None, _) => {
                    return Err(PosetError::Parse {
                        line,
                        message: "first line must hold the element count".into(),
                    })
                }
                (Some(_), [a, b]) => pairs.push((parse(a)?, parse(b)?)),
                (Some(_), _) => {
                    return Err(PosetError::Parse {
                        line,
                        message: format!("expected `a b`, found `{content}`"),
                    })
                }
            }
        }
        let n = n.ok_or(PosetError::Parse {
            line: 0,
            message: "empty input".into(),
        })?;
        Poset::new(n, &pairs)
    }
}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Poset")
            .field("n", &self.n)
            .field("covers", &self.covers())
            .finish()
    }
}

/// Whether an order-preserving bijection between the two posets exists.
///
/// Paths and cycles are decided by their orientation words; anything else
/// falls back to a backtracking search of at most [`ISOMORPHISM_BOUND`]
/// elements.
pub fn posets_isomorphic(p: &Poset, q: &Poset) -> Result<bool, PosetError> {
    posets_isomorphic_bounded(p, q, ISOMORPHISM_BOUND)
}

pub fn posets_isomorphic_bounded(p: &Poset, q: &Poset, bound: usize) -> Result<bool, PosetError> {
    if p.n != q.n || p.covers.len() != q.covers.len() {
        return Ok(false);
    }
    if p.is_connected() && q.is_connected() {
        let (sp, sq) = (p.hasse_shape()?, q.hasse_shape()?);
        if sp.kind != sq.kind {
            return Ok(false);
        }
        if let (Some(wp), Some(wq)) = (&sp.orientation_word, &sq.orientation_word) {
            return Ok(match sp.kind {
                ShapeKind::OrientedPath => canonical_path_word(wp) == canonical_path_word(wq),
                _ => canonical_cycle_word(wp) == canonical_cycle_word(wq),
            });
        }
    }
    if p.n > bound {
        return Err(PosetError::TooLarge { n: p.n, bound });
    }
    Ok(find_isomorphism(p, q).is_some())
}

/// Some bijection `f` (0-based) with `a ⪯ b` iff `f(a) ⪯ f(b)`.
pub(crate) fn find_isomorphism(p: &Poset, q: &Poset) -> Option<Vec<usize>> {
    let n = p.n;
    let profile = |s: &Poset, a: usize| {
        let below = (0..n).filter(|&b| s.leq[b][a]).count();
        let above = (0..n).filter(|&b| s.leq[a][b]).count();
        (below, above)
    };
    let pp: Vec<_> = (0..n).map(|a| profile(p, a)).collect();
    let qp: Vec<_> = (0..n).map(|a| profile(q, a)).collect();
    let mut ps = pp.clone();
    let mut qs = qp.clone();
    ps.sort_unstable();
    qs.sort_unstable();
    if ps != qs {
        return None;
    }
    fn extend(
        p: &Poset,
        q: &Poset,
        pp: &[(usize, usize)],
        qp: &[(usize, usize)],
        map: &mut Vec<usize>,
        used: &mut [bool],
    ) -> bool {
        let a = map.len();
        if a == p.n {
            return true;
        }
        for b in 0..q.n {
            if used[b] || pp[a] != qp[b] {
                continue;
            }
            let consistent = map
                .iter()
                .enumerate()
                .all(|(x, &fx)| p.leq[x][a] == q.leq[fx][b] && p.leq[a][x] == q.leq[b][fx]);
            if !consistent {
                continue;
            }
            map.push(b);
            used[b] = true;
            if extend(p, q, pp, qp, map, used) {
                return true;
            }
            map.pop();
            used[b] = false;
        }
        false
    }
    let mut map = Vec::with_capacity(n);
    let mut used = vec![false; n];
    extend(p, q, &pp, &qp, &mut map, &mut used).then_some(map)
}
