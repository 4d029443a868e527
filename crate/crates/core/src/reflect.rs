//! (min,max)-reflections of posets at extremal elements.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use thiserror::Error;

use crate::linalg::IntMatrix;
use crate::poset::{Poset, PosetError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReflectError {
    #[error("element {0} is neither minimal nor maximal")]
    NotExtremal(usize),
    #[error(transparent)]
    Poset(#[from] PosetError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReflectionStep {
    /// 1-based pivot element.
    pub pivot: usize,
    pub before: Poset,
    pub after: Poset,
    /// The reflection matrix at the pivot.
    pub matrix: IntMatrix,
    /// The pivot is junction-free both before and after, so
    /// `matrixᵀ · C_before · matrix = C_after` is guaranteed.
    pub congruence_certified: bool,
}

fn extremal0(p: &Poset, a: usize) -> Result<usize, ReflectError> {
    let a0 = p.check_element(a)?;
    if p.is_minimal0(a0) || p.is_maximal0(a0) {
        Ok(a0)
    } else {
        Err(ReflectError::NotExtremal(a))
    }
}

/// No two distinct cover-neighbours of `a` share an upper bound (for
/// minimal `a`) or a lower bound (for maximal `a`).
pub fn is_junction_free(p: &Poset, a: usize) -> Result<bool, ReflectError> {
    let a0 = extremal0(p, a)?;
    Ok(junction_free0(p, a0))
}

fn junction_free0(p: &Poset, a: usize) -> bool {
    let nbrs: Vec<usize> = p.neighbours0(a).into_iter().collect();
    let upward = p.is_minimal0(a);
    for (i, &b) in nbrs.iter().enumerate() {
        for &c in &nbrs[i + 1..] {
            let shared = (0..p.n()).any(|d| {
                if upward {
                    p.leq0(b, d) && p.leq0(c, d)
                } else {
                    p.leq0(d, b) && p.leq0(d, c)
                }
            });
            if shared {
                return false;
            }
        }
    }
    true
}

/// Identity except `−1` at `(a, a)` and `1` at `(i, a)` for each neighbour
/// `i`; all indices 0-based.
pub(crate) fn reflection_matrix0(n: usize, a: usize, neighbours: &[usize]) -> IntMatrix {
    let mut m = IntMatrix::identity(n);
    m.set(a, a, BigInt::from(-1));
    for &i in neighbours {
        m.set(i, a, BigInt::from(1));
    }
    m
}

/// The reflection matrix of `p` at the 1-based element `a`.
pub fn reflection_matrix(p: &Poset, a: usize) -> Result<IntMatrix, ReflectError> {
    let a0 = p.check_element(a)?;
    let nbrs: Vec<usize> = p.neighbours0(a0).into_iter().collect();
    Ok(reflection_matrix0(p.n(), a0, &nbrs))
}

/// Reverses every cover arrow at `a` and closes transitively.
pub fn reflect_poset(p: &Poset, a: usize) -> Result<Poset, ReflectError> {
    let a0 = extremal0(p, a)?;
    Ok(reflect0(p, a0))
}

fn reflect0(p: &Poset, a: usize) -> Poset {
    let pairs: Vec<(usize, usize)> = p
        .covers0()
        .iter()
        .map(|&(x, y)| if x == a || y == a { (y, x) } else { (x, y) })
        .collect();
    Poset::from_pairs0(p.n(), &pairs).expect("reflection at an extremal element stays acyclic")
}

pub fn minmax_reflection(p: &Poset, a: usize) -> Result<ReflectionStep, ReflectError> {
    let a0 = extremal0(p, a)?;
    let after = reflect0(p, a0);
    let nbrs: Vec<usize> = p.neighbours0(a0).into_iter().collect();
    let congruence_certified = junction_free0(p, a0) && junction_free0(&after, a0);
    Ok(ReflectionStep {
        pivot: a,
        before: p.clone(),
        after,
        matrix: reflection_matrix0(p.n(), a0, &nbrs),
        congruence_certified,
    })
}

/// 1-based minimal and maximal elements, in increasing order.
pub fn extremal_elements(p: &Poset) -> BTreeSet<usize> {
    let e = p.extremes();
    e.minimal.union(&e.maximal).copied().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example_j() -> Poset {
        Poset::new(5, &[(2, 1), (3, 2), (4, 2), (3, 5), (4, 5)]).unwrap()
    }

    #[test]
    fn reflecting_j_at_five() {
        let s5 = reflect_poset(&example_j(), 5).unwrap();
        assert_eq!(
            s5.relations(),
            vec![
                (2, 1),
                (3, 1),
                (3, 2),
                (4, 1),
                (4, 2),
                (5, 1),
                (5, 2),
                (5, 3),
                (5, 4)
            ]
        );
        assert!(is_junction_free(&s5, 1).unwrap());
        assert!(!is_junction_free(&s5, 5).unwrap());
    }

    #[test]
    fn non_extremal_pivot_rejected() {
        assert_eq!(
            reflect_poset(&example_j(), 2),
            Err(ReflectError::NotExtremal(2))
        );
        assert!(matches!(
            minmax_reflection(&example_j(), 9),
            Err(ReflectError::Poset(PosetError::OutOfRange { .. }))
        ));
    }

    #[test]
    fn reflection_matrix_at_one() {
        let b = reflection_matrix(&example_j(), 1).unwrap();
        let expected = IntMatrix::from_rows_i64(&[
            [-1, 0, 0, 0, 0],
            [1, 1, 0, 0, 0],
            [0, 0, 1, 0, 0],
            [0, 0, 0, 1, 0],
            [0, 0, 0, 0, 1],
        ])
        .unwrap();
        assert_eq!(b, expected);
    }

    #[test]
    fn step_is_an_involution() {
        let j = example_j();
        for a in extremal_elements(&j) {
            let step = minmax_reflection(&j, a).unwrap();
            let back = minmax_reflection(&step.after, a).unwrap();
            assert_eq!(back.after, j);
            assert!((&step.matrix * &step.matrix).is_identity());
        }
    }
}
