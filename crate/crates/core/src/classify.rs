//! Type A detection from the Hasse shape, the cycle index, and the two
//! canonical representatives.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::IntPolynomial;
use crate::poset::{Arrow, Poset, PosetError, ShapeKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("poset is not connected")]
    Disconnected,
    #[error("Hasse digraph is not an oriented cycle")]
    NotACycle,
    #[error("no canonical poset for n = {n}{}", .p.map(|p| format!(", p = {p}")).unwrap_or_default())]
    InvalidParameters { n: usize, p: Option<usize> },
    #[error("poset is not of Dynkin type A")]
    NotTypeA,
}

/// Type A verdict; `m` is the Dynkin subscript.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum TypeAClass {
    Positive { m: usize },
    Principal { m: usize, cycle_index: usize },
    NotTypeA,
}

fn shape_or_disconnected(p: &Poset) -> Result<crate::poset::HasseShape, ClassifyError> {
    p.hasse_shape().map_err(|e| match e {
        PosetError::Disconnected => ClassifyError::Disconnected,
        other => unreachable!("hasse_shape only fails on disconnected input: {other}"),
    })
}

pub fn detect_type_a(p: &Poset) -> Result<TypeAClass, ClassifyError> {
    let shape = shape_or_disconnected(p)?;
    Ok(match shape.kind {
        ShapeKind::OrientedPath => TypeAClass::Positive { m: p.n() },
        ShapeKind::OrientedCycle if p.extremes().maximal.len() >= 2 => TypeAClass::Principal {
            m: p.n() - 1,
            cycle_index: index_of_word(shape.orientation_word.as_deref().unwrap_or_default()),
        },
        _ => TypeAClass::NotTypeA,
    })
}

fn index_of_word(word: &[Arrow]) -> usize {
    let forward = word.iter().filter(|&&a| a == Arrow::F).count();
    forward.max(word.len() - forward)
}

/// Larger of the two arrow-direction counts around the Hasse cycle.
pub fn cycle_index(p: &Poset) -> Result<usize, ClassifyError> {
    let shape = shape_or_disconnected(p)?;
    match (shape.kind, shape.orientation_word) {
        (ShapeKind::OrientedCycle, Some(word)) => Ok(index_of_word(&word)),
        _ => Err(ClassifyError::NotACycle),
    }
}

/// The chain `1 ⪯ 2 ⪯ … ⪯ n`.
pub fn canonical_one_peak(n: usize) -> Result<Poset, ClassifyError> {
    if n == 0 {
        return Err(ClassifyError::InvalidParameters { n, p: None });
    }
    let pairs: Vec<_> = (1..n).map(|i| (i, i + 1)).collect();
    Ok(Poset::new(n, &pairs).expect("a chain is a poset"))
}

/// Canonical two-peak poset: chains `1 → 3 → … → p → n` and
/// `2 → p+1 → … → n−2 → n`, joined by `1 → n−1` and `2 → n−1`.
pub fn canonical_two_peak(n: usize, p: usize) -> Result<Poset, ClassifyError> {
    if n < 4 || 2 * p < n || p + 2 > n {
        return Err(ClassifyError::InvalidParameters { n, p: Some(p) });
    }
    let first: Vec<usize> = [1].into_iter().chain(3..=p).chain([n]).collect();
    let second: Vec<usize> = [2].into_iter().chain(p + 1..=n - 2).chain([n]).collect();
    let mut pairs = Vec::with_capacity(n);
    for chain in [&first, &second] {
        pairs.extend(chain.windows(2).map(|w| (w[0], w[1])));
    }
    pairs.push((1, n - 1));
    pairs.push((2, n - 1));
    Ok(Poset::new(n, &pairs).expect("two-peak covers are acyclic"))
}

/// The Coxeter polynomial predicted by the type A classification, without
/// building the Coxeter matrix.
pub fn coxeter_type(p: &Poset) -> Result<IntPolynomial, ClassifyError> {
    match detect_type_a(p)? {
        TypeAClass::Positive { m } => Ok(IntPolynomial::geometric(m)),
        TypeAClass::Principal { cycle_index, .. } => {
            Ok(IntPolynomial::principal_type(p.n(), cycle_index))
        }
        TypeAClass::NotTypeA => Err(ClassifyError::NotTypeA),
    }
}
