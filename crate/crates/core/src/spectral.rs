//! Coxeter spectral invariants: Gram forms, the Coxeter matrix and its
//! characteristic polynomial, corank, kernel lattice and Coxeter numbers.

use num_bigint::BigInt;
use num_traits::Signed;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{
    char_poly, kernel_lattice_basis, mat_inverse_integral, symmetric_signature, IntMatrix,
    IntVector, MatrixOrder,
};
use crate::poly::IntPolynomial;
use crate::poset::Poset;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpectralError {
    #[error("vector has length {actual}, poset has {expected} elements")]
    DimensionMismatch { expected: usize, actual: usize },
}

/// A kernel basis that is the identity on a set of coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecialBasis {
    /// 1-based coordinates `k_1 < … < k_r`; vector `i` has entry 1 at `k_i`
    /// and 0 at every other `k_j`.
    pub coordinates: Vec<usize>,
    pub vectors: Vec<IntVector>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectralReport {
    pub n: usize,
    /// `n − rank` of the symmetric Gram matrix.
    pub corank: usize,
    pub nonnegative: bool,
    /// Coefficients lowest degree first.
    pub coxeter_polynomial: IntPolynomial,
    pub coxeter_number: MatrixOrder,
    /// `None` when the poset is not non-negative.
    pub reduced_coxeter_number: Option<MatrixOrder>,
    /// Hermite-normal-form basis of the radical of the Gram form.
    pub kernel_basis: Vec<IntVector>,
    pub special_basis: Option<SpecialBasis>,
}

/// `max(1000, 4n²)`, large enough for every Coxeter number of type A.
pub fn default_cutoff(n: usize) -> u64 {
    1000u64.max(4 * (n as u64) * (n as u64))
}

/// `C + Cᵀ`, twice the symmetric Gram matrix.
pub fn symmetric_gram_doubled(p: &Poset) -> IntMatrix {
    let c = p.incidence_matrix();
    &c + &c.transpose()
}

fn check_len(p: &Poset, v: &IntVector) -> Result<(), SpectralError> {
    if v.len() == p.n() {
        Ok(())
    } else {
        Err(SpectralError::DimensionMismatch {
            expected: p.n(),
            actual: v.len(),
        })
    }
}

/// `Σ_{i⪯j} x_i y_j`.
pub fn bilinear_form(p: &Poset, x: &IntVector, y: &IntVector) -> Result<BigInt, SpectralError> {
    check_len(p, x)?;
    check_len(p, y)?;
    Ok(p.incidence_matrix().vec_mul(x).dot(y))
}

pub fn quadratic_form(p: &Poset, v: &IntVector) -> Result<BigInt, SpectralError> {
    bilinear_form(p, v, v)
}

/// `−C · (C⁻¹)ᵀ`.
pub fn coxeter_matrix(p: &Poset) -> IntMatrix {
    let c = p.incidence_matrix();
    let inv = mat_inverse_integral(&c).expect("incidence matrices are unimodular");
    -&(&c * &inv.transpose())
}

pub fn coxeter_polynomial(p: &Poset) -> IntPolynomial {
    char_poly(&coxeter_matrix(p))
}

/// Whether `(Cox^k − E)` maps every basis vector into the radical of the
/// Gram form, i.e. `2G · (Cox^k − E)ᵀ = 0`.
fn kills_kernel_test(gram2: &IntMatrix, power: &IntMatrix) -> bool {
    let diff = power - &IntMatrix::identity(power.dim());
    (gram2 * &diff.transpose()).is_zero()
}

/// Coxeter number and reduced Coxeter number in one pass over the powers
/// of `cox`. The reduced number is only searched for when `reduced` is set.
fn coxeter_numbers(
    cox: &IntMatrix,
    gram2: &IntMatrix,
    cutoff: u64,
    reduced: bool,
) -> (MatrixOrder, Option<MatrixOrder>) {
    let mut order = None;
    let mut red = None;
    let mut power = cox.clone();
    for k in 1..=cutoff {
        if order.is_none() && power.is_identity() {
            order = Some(k);
        }
        if reduced && red.is_none() && kills_kernel_test(gram2, &power) {
            red = Some(k);
        }
        if order.is_some() && (red.is_some() || !reduced) {
            break;
        }
        if k < cutoff {
            power = &power * cox;
        }
    }
    let wrap = |k: Option<u64>| k.map_or(MatrixOrder::ExceedsCutoff, MatrixOrder::Finite);
    (wrap(order), reduced.then(|| wrap(red)))
}

/// Picks the lexicographically first coordinate set on which the basis has
/// a unimodular minor and rewrites the basis to be the identity there.
pub fn special_basis(basis: &[IntVector]) -> Option<SpecialBasis> {
    let r = basis.len();
    if r == 0 {
        return Some(SpecialBasis {
            coordinates: vec![],
            vectors: vec![],
        });
    }
    let n = basis[0].len();
    const SEARCH_LIMIT: usize = 200_000;
    let mut tried = 0;
    let mut cols: Vec<usize> = (0..r).collect();
    loop {
        tried += 1;
        if tried > SEARCH_LIMIT {
            return None;
        }
        let minor = IntMatrix::from_fn(r, |i, j| basis[i][cols[j]].clone());
        if minor.determinant().abs() == BigInt::from(1) {
            let inv = mat_inverse_integral(&minor).expect("minor is unimodular");
            let vectors = (0..r)
                .map(|i| {
                    IntVector::new(
                        (0..n)
                            .map(|c| (0..r).map(|k| inv.get(i, k) * &basis[k][c]).sum())
                            .collect(),
                    )
                })
                .collect();
            return Some(SpecialBasis {
                coordinates: cols.iter().map(|c| c + 1).collect(),
                vectors,
            });
        }
        // Next r-subset of 0..n in lexicographic order.
        let mut i = r;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            if cols[i] < n - r + i {
                break;
            }
        }
        cols[i] += 1;
        for j in i + 1..r {
            cols[j] = cols[j - 1] + 1;
        }
    }
}

pub fn spectral_report(p: &Poset, order_cutoff: u64) -> SpectralReport {
    let n = p.n();
    let gram2 = symmetric_gram_doubled(p);
    let sig = symmetric_signature(&gram2).expect("Gram matrix is symmetric");
    let cox = coxeter_matrix(p);
    let nonnegative = sig.positive_semidefinite;
    let (coxeter_number, reduced_coxeter_number) =
        coxeter_numbers(&cox, &gram2, order_cutoff, nonnegative);
    let kernel_basis = kernel_lattice_basis(&gram2);
    let special = special_basis(&kernel_basis);
    SpectralReport {
        n,
        corank: n - sig.rank,
        nonnegative,
        coxeter_polynomial: char_poly(&cox),
        coxeter_number,
        reduced_coxeter_number,
        kernel_basis,
        special_basis: special,
    }
}

/// `k` passes the reduced-Coxeter kernel test: `2G·(Cox^k − E)ᵀ = 0`.
pub fn passes_reduced_test(p: &Poset, k: u64) -> bool {
    let cox = coxeter_matrix(p);
    let mut power = IntMatrix::identity(p.n());
    for _ in 0..k {
        power = &power * &cox;
    }
    kills_kernel_test(&symmetric_gram_doubled(p), &power)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(n: usize) -> Poset {
        let pairs: Vec<_> = (1..n).map(|i| (i, i + 1)).collect();
        Poset::new(n, &pairs).unwrap()
    }

    fn two_peak_4() -> Poset {
        Poset::new(4, &[(1, 4), (2, 4), (1, 3), (2, 3)]).unwrap()
    }

    #[test]
    fn gram_of_small_posets() {
        assert_eq!(
            symmetric_gram_doubled(&chain(2)),
            IntMatrix::from_rows_i64(&[[2, 1], [1, 2]]).unwrap()
        );
        let anti = Poset::new(3, &[]).unwrap();
        assert_eq!(
            symmetric_gram_doubled(&anti),
            &IntMatrix::identity(3) + &IntMatrix::identity(3)
        );
    }

    #[test]
    fn forms() {
        let p = two_peak_4();
        let h = IntVector::from_i64s(&[-1, -1, 1, 1]);
        assert_eq!(quadratic_form(&p, &h).unwrap(), BigInt::from(0));
        assert_eq!(
            quadratic_form(&p, &IntVector::zeros(4)).unwrap(),
            BigInt::from(0)
        );
        let x = IntVector::from_i64s(&[1, 0]);
        let y = IntVector::from_i64s(&[0, 1]);
        assert_eq!(bilinear_form(&chain(2), &x, &y).unwrap(), BigInt::from(1));
        assert_eq!(bilinear_form(&chain(2), &y, &x).unwrap(), BigInt::from(0));
        assert_eq!(
            quadratic_form(&p, &IntVector::zeros(3)),
            Err(SpectralError::DimensionMismatch {
                expected: 4,
                actual: 3
            })
        );
    }

    #[test]
    fn coxeter_matrices() {
        assert_eq!(
            coxeter_matrix(&chain(2)),
            IntMatrix::from_rows_i64(&[[0, -1], [1, -1]]).unwrap()
        );
        assert_eq!(
            coxeter_matrix(&chain(1)),
            IntMatrix::from_rows_i64(&[[-1]]).unwrap()
        );
    }

    #[test]
    fn report_for_chain() {
        let r = spectral_report(&chain(3), default_cutoff(3));
        assert_eq!(r.corank, 0);
        assert!(r.nonnegative);
        assert_eq!(r.coxeter_polynomial, IntPolynomial::geometric(3));
        assert_eq!(r.coxeter_number, MatrixOrder::Finite(4));
        assert_eq!(r.reduced_coxeter_number, Some(MatrixOrder::Finite(4)));
        assert!(r.kernel_basis.is_empty());
    }

    #[test]
    fn report_for_two_peak() {
        let r = spectral_report(&two_peak_4(), 1000);
        assert_eq!(r.corank, 1);
        assert_eq!(
            r.coxeter_polynomial,
            IntPolynomial::from_i64s(&[1, 0, -2, 0, 1])
        );
        assert_eq!(r.coxeter_number, MatrixOrder::ExceedsCutoff);
        assert_eq!(r.reduced_coxeter_number, Some(MatrixOrder::Finite(2)));
        assert_eq!(r.kernel_basis, vec![IntVector::from_i64s(&[1, 1, -1, -1])]);
        let special = r.special_basis.unwrap();
        assert_eq!(special.coordinates, vec![1]);
        assert_eq!(special.vectors, r.kernel_basis);
    }

    #[test]
    fn special_basis_rewrites_to_identity() {
        let basis = vec![
            IntVector::from_i64s(&[2, 1, 0]),
            IntVector::from_i64s(&[1, 1, 1]),
        ];
        let s = special_basis(&basis).unwrap();
        assert_eq!(s.coordinates, vec![1, 2]);
        assert_eq!(s.vectors[0], IntVector::from_i64s(&[1, 0, -1]));
        assert_eq!(s.vectors[1], IntVector::from_i64s(&[0, 1, 2]));
        assert!(special_basis(&[IntVector::from_i64s(&[2, 4])]).is_none());
    }

    #[test]
    fn default_cutoff_values() {
        assert_eq!(default_cutoff(3), 1000);
        assert_eq!(default_cutoff(20), 1600);
    }

    #[test]
    fn report_serializes_expected_keys() {
        let r = spectral_report(&two_peak_4(), 1000);
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        assert_eq!(v["coxeter_polynomial"], serde_json::json!([1, 0, -2, 0, 1]));
        assert_eq!(v["coxeter_number"], serde_json::json!("exceeds_cutoff"));
        assert_eq!(v["reduced_coxeter_number"], serde_json::json!(2));
        let back: SpectralReport = serde_json::from_value(v).unwrap();
        assert_eq!(back, r);
    }
}
