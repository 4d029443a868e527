//! Reduction of type A posets to their canonical representatives, with an
//! explicit unimodular witness `B` satisfying `Bᵀ · C_source · B = C_target`.
//!
//! Every witness is checked before it is returned; a failed check is an
//! error, never a silently wrong matrix.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classify::{
    canonical_one_peak, canonical_two_peak, coxeter_type, detect_type_a, ClassifyError, TypeAClass,
};
use crate::linalg::{mat_inverse_integral, IntMatrix};
use crate::poly::IntPolynomial;
use crate::poset::Poset;
use crate::reflect::reflection_matrix0;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CongruenceError {
    #[error("poset is not a positive poset of type A")]
    NotPositiveTypeA,
    #[error("poset is not a principal poset of type A")]
    NotPrincipalTypeA,
    #[error("poset is not of Dynkin type A")]
    NotTypeA,
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error("reduction produced a matrix that fails the congruence check ({0})")]
    Unverified(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CanonicalTarget {
    OnePeak,
    TwoPeak { p: usize },
}

impl CanonicalTarget {
    pub fn poset(self, n: usize) -> Result<Poset, ClassifyError> {
        match self {
            CanonicalTarget::OnePeak => canonical_one_peak(n),
            CanonicalTarget::TwoPeak { p } => canonical_two_peak(n, p),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruenceWitness {
    pub source: Poset,
    pub target: Poset,
    pub target_kind: CanonicalTarget,
    pub b: IntMatrix,
    pub verified: bool,
    /// Number of dense `n × n` products performed.
    pub multiplications_used: usize,
}

/// JSON form of a witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub n: usize,
    pub target: CanonicalTarget,
    #[serde(rename = "B")]
    pub b: IntMatrix,
    pub verified: bool,
    pub multiplications_used: usize,
}

impl CongruenceWitness {
    pub fn record(&self) -> WitnessRecord {
        WitnessRecord {
            n: self.source.n(),
            target: self.target_kind,
            b: self.b.clone(),
            verified: self.verified,
            multiplications_used: self.multiplications_used,
        }
    }
}

/// `B` is unimodular and `Bᵀ · C_from · B = C_to`.
pub fn is_congruence(b: &IntMatrix, from: &IntMatrix, to: &IntMatrix) -> bool {
    b.dim() == from.dim()
        && b.dim() == to.dim()
        && b.is_unimodular()
        && &(&b.transpose() * from) * b == *to
}

/// Recomputes the witness conditions from scratch.
pub fn verify_witness(w: &CongruenceWitness) -> bool {
    is_congruence(
        &w.b,
        &w.source.incidence_matrix(),
        &w.target.incidence_matrix(),
    )
}

struct Counter(usize);

impl Counter {
    fn mul(&mut self, a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
        self.0 += 1;
        a * b
    }
}

fn adjacency(p: &Poset) -> (Vec<Vec<usize>>, Vec<bool>, Vec<bool>) {
    let n = p.n();
    let mut nbrs = vec![Vec::new(); n];
    let mut has_in = vec![false; n];
    let mut has_out = vec![false; n];
    for &(a, b) in p.covers0() {
        nbrs[a].push(b);
        nbrs[b].push(a);
        has_out[a] = true;
        has_in[b] = true;
    }
    for v in nbrs.iter_mut() {
        v.sort_unstable();
    }
    (nbrs, has_in, has_out)
}

fn finish(
    source: &Poset,
    target_kind: CanonicalTarget,
    b: IntMatrix,
    multiplications_used: usize,
) -> Result<CongruenceWitness, CongruenceError> {
    let target = target_kind.poset(source.n())?;
    let mut w = CongruenceWitness {
        source: source.clone(),
        target,
        target_kind,
        b,
        verified: false,
        multiplications_used,
    };
    w.verified = verify_witness(&w);
    if w.verified {
        Ok(w)
    } else {
        Err(CongruenceError::Unverified(format!(
            "source covers {:?}",
            source.covers()
        )))
    }
}

/// Witness for a positive poset against the chain, by a single sweep of
/// composed reflections along the Hasse path.
pub fn reduce_positive(p: &Poset) -> Result<CongruenceWitness, CongruenceError> {
    if !matches!(detect_type_a(p)?, TypeAClass::Positive { .. }) {
        return Err(CongruenceError::NotPositiveTypeA);
    }
    let n = p.n();
    if n == 1 {
        return finish(p, CanonicalTarget::OnePeak, IntMatrix::identity(1), 0);
    }
    let (nbrs, has_in, has_out) = adjacency(p);
    let mut inner: Vec<bool> = (0..n).map(|j| has_in[j] && has_out[j]).collect();
    let start = (0..n)
        .find(|&j| nbrs[j].len() == 1)
        .expect("a path has a leaf");
    let start_is_max = has_in[start];
    let mut line = vec![start, nbrs[start][0]];
    while let Some(&next) = nbrs[line[line.len() - 1]]
        .iter()
        .find(|&&w| w != line[line.len() - 2])
    {
        line.push(next);
    }
    let refl = |j: usize| {
        let mut around = Vec::with_capacity(2);
        if j > 0 {
            around.push(line[j - 1]);
        }
        if j + 1 < n {
            around.push(line[j + 1]);
        }
        reflection_matrix0(n, line[j], &around)
    };
    let mut count = Counter(0);
    let mut b = IntMatrix::identity(n);
    let mut pending = refl(0);
    let mut k = 0;
    for i in 2..n {
        if inner[line[i - 1]] {
            continue;
        }
        inner[line[i]] = !inner[line[i]];
        for j in k + 1..i {
            pending = count.mul(&refl(j), &pending);
        }
        b = count.mul(&b, &pending);
        k = i - 1;
    }
    if start_is_max {
        line.reverse();
    }
    finish(
        p,
        CanonicalTarget::OnePeak,
        b.select_columns(&line),
        count.0,
    )
}

/// Witness for a principal poset against the canonical two-peak poset with
/// the same cycle index.
pub fn reduce_principal(p: &Poset) -> Result<CongruenceWitness, CongruenceError> {
    let TypeAClass::Principal { cycle_index, .. } = detect_type_a(p)? else {
        return Err(CongruenceError::NotPrincipalTypeA);
    };
    let n = p.n();
    let (nbrs, has_in, has_out) = adjacency(p);
    let mut extremal: Vec<bool> = (0..n).map(|j| !has_in[j] || !has_out[j]).collect();

    // Walk the circle from the largest-labelled minimal element towards its
    // smaller neighbour.
    let start = (0..n)
        .rev()
        .find(|&j| !has_in[j])
        .expect("a cycle has a minimal element");
    let mut circ = vec![start, nbrs[start][0]];
    loop {
        let last = circ[circ.len() - 1];
        let prev = circ[circ.len() - 2];
        let next = *nbrs[last]
            .iter()
            .find(|&&w| w != prev)
            .expect("cycle vertices have degree 2");
        if next == start {
            break;
        }
        circ.push(next);
    }

    let mut count = Counter(0);
    let guard = 4 * n * n + 16;
    let mut steps = 0;
    let mut tick = || {
        steps += 1;
        if steps > guard {
            Err(CongruenceError::Unverified(
                "circle walk did not terminate".into(),
            ))
        } else {
            Ok(())
        }
    };

    let next_extremal = |extremal: &[bool], i: usize| -> usize {
        (i..i + n).find(|&j| extremal[circ[j % n]]).unwrap_or(i) % n
    };
    let refl_at = |u: usize| {
        let around = [circ[(u + n - 1) % n], circ[(u + 1) % n]];
        reflection_matrix0(n, circ[u % n], &around)
    };
    // Composition of reflections moving an extremal element from position
    // `k` back to position `p`.
    let min_max_move = |extremal: &mut Vec<bool>, count: &mut Counter, k: usize, p: usize| {
        let mut m = IntMatrix::identity(n);
        let mut i = k;
        while i > p {
            m = count.mul(&m, &refl_at(i));
            let before = circ[(i + n - 1) % n];
            let after = circ[(i + 1) % n];
            extremal[before] = !extremal[before];
            extremal[after] = !extremal[after];
            i -= 1;
        }
        m
    };

    let mut b = IntMatrix::identity(n);
    for i in [1, 2] {
        if !extremal[circ[i]] {
            tick()?;
            let k = next_extremal(&extremal, i);
            let m = min_max_move(&mut extremal, &mut count, k, i);
            b = count.mul(&b, &m);
        }
    }
    let mut top = next_extremal(&extremal, 3);
    loop {
        tick()?;
        let k = next_extremal(&extremal, top + 1);
        if k == 0 {
            break;
        }
        let m = min_max_move(&mut extremal, &mut count, k, top);
        b = count.mul(&b, &m);
        top = next_extremal(&extremal, top + 1);
    }

    if top < n + 2 - top {
        circ.swap(0, 2);
        for i in 3..=(n - 3) / 2 + 2 {
            circ.swap(i, n + 2 - i);
        }
        top = n + 2 - top;
    }
    let mut perm = vec![0; n];
    perm[0] = circ[2];
    perm[1] = circ[0];
    perm[n - 1] = circ[top];
    perm[n - 2] = circ[1];
    for i in 3..top {
        perm[i - 1] = circ[i];
    }
    for i in 1..n - top {
        perm[top + i - 2] = circ[n - i];
    }
    let index = top - 1;
    if index != cycle_index {
        return Err(CongruenceError::Unverified(format!(
            "walk ended at index {index}, cycle index is {cycle_index}"
        )));
    }
    finish(
        p,
        CanonicalTarget::TwoPeak { p: index },
        b.select_columns(&perm),
        count.0,
    )
}

/// Dispatches on the type A verdict.
pub fn canonicalize(p: &Poset) -> Result<CongruenceWitness, CongruenceError> {
    match detect_type_a(p)? {
        TypeAClass::Positive { .. } => reduce_positive(p),
        TypeAClass::Principal { .. } => reduce_principal(p),
        TypeAClass::NotTypeA => Err(CongruenceError::NotTypeA),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PairOutcome {
    /// `Bᵀ · C_left · B = C_right`, checked.
    Congruent(IntMatrix),
    NotCongruent {
        left: IntPolynomial,
        right: IntPolynomial,
    },
}

/// Decides strong Gram congruence of two type A posets, composing their
/// canonical witnesses when the canonical targets agree.
pub fn pair_congruence(p: &Poset, q: &Poset) -> Result<PairOutcome, CongruenceError> {
    let wp = canonicalize(p)?;
    let wq = canonicalize(q)?;
    if p.n() != q.n() || wp.target_kind != wq.target_kind {
        return Ok(PairOutcome::NotCongruent {
            left: coxeter_type(p)?,
            right: coxeter_type(q)?,
        });
    }
    let inv = mat_inverse_integral(&wq.b)
        .map_err(|e| CongruenceError::Unverified(format!("witness not invertible: {e}")))?;
    let b = &wp.b * &inv;
    if is_congruence(&b, &p.incidence_matrix(), &q.incidence_matrix()) {
        Ok(PairOutcome::Congruent(b))
    } else {
        Err(CongruenceError::Unverified(
            "composed witness fails the congruence check".into(),
        ))
    }
}
